#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cat/board.hpp"

namespace cat {

enum class SchemaErrorKind { malformed, incomplete, invalid_coordinate, uncoloured, unknown_color };

class SchemaError : public std::runtime_error {
public:
    SchemaError(SchemaErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind(kind) {}
    SchemaErrorKind kind;
};

/// Parses a schema document:
///   {"id": "...", "cells": {"A3": "yellow", ..., "F4": "blue"}, "complexity": 2}
/// Throws SchemaError.
Schema load_schema(std::string_view document);
Schema load_schema(std::istream& in);
Schema load_schema_file(const std::string& path);

/// Canonical serialisation: keys in row A..F, column ascending order, one
/// trailing newline.
std::string save_schema(const Schema& schema);

// Bundled stand-in schema sets. These are generated patterns of increasing
// regularity, not the original pilot artwork.
const std::vector<Schema>& validation_schemas();
const std::vector<Schema>& training_schemas();

}  // namespace cat
