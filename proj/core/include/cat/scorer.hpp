#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cat/board.hpp"
#include "cat/events.hpp"
#include "cat/expected.hpp"
#include "cat/lang.hpp"

namespace cat {

/// Algorithmic dimension: individual dots (D0), multi-dot patterns (D1),
/// alternation, repetition or mirroring (D2).
enum class AlgorithmDimension : std::uint8_t { D0, D1, D2 };

std::string_view to_string(AlgorithmDimension d) noexcept;
std::optional<AlgorithmDimension> parse_dimension(std::string_view s) noexcept;

/// G = gesture interface, P = visual programming interface.
enum class Artefact : std::uint8_t { G, P };

std::string_view to_string(Artefact a) noexcept;
std::optional<Artefact> parse_artefact(std::string_view s) noexcept;

struct InteractionDimension {
    Artefact artefact = Artefact::G;
    bool feedback = false;

    /// "GF", "G", "PF" or "P".
    [[nodiscard]] std::string label() const;
    static std::optional<InteractionDimension> parse(std::string_view label) noexcept;

    friend bool operator==(const InteractionDimension&, const InteractionDimension&) = default;
};

/// Contribution of one command, or nullopt for movement commands.
std::optional<AlgorithmDimension> classify_command(const Command& c);
/// Highest dimension across the program; nullopt when nothing paints.
std::optional<AlgorithmDimension> classify_dimension(const Program& p);

// ---------------------------------------------------------------------------
// Rubric and score
// ---------------------------------------------------------------------------

class RubricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Rubric {
    std::string id = "default";
    std::array<int, 3> algorithm{0, 1, 2};  // D0, D1, D2
    std::array<int, 2> artefact{0, 1};      // G, P
    int with_feedback = 0;
    int without_feedback = 1;

    friend bool operator==(const Rubric&, const Rubric&) = default;
};

Rubric default_rubric();
/// {"id": "...", "algorithm": {"D0":0,"D1":1,"D2":2}, "artefact": {"G":0,"P":1},
///  "autonomy": {"feedback":0,"no_feedback":1}}. Throws RubricError.
Rubric load_rubric(std::string_view document);
Rubric load_rubric_file(const std::string& path);
std::string save_rubric(const Rubric& r);

struct CatScore {
    int algorithm_points = 0;
    int artefact_points = 0;
    int autonomy_points = 0;
    int total = 0;
    std::string rubric_id;

    friend bool operator==(const CatScore&, const CatScore&) = default;
};

CatScore cat_score(AlgorithmDimension dimension, InteractionDimension interaction, const Rubric& rubric);

/// Complete and correct: all 20 cells coloured exactly as in the reference.
bool check_success(const CrossBoard& board, const Schema& reference);

// ---------------------------------------------------------------------------
// Interaction from the event log
// ---------------------------------------------------------------------------

/// Interface and feedback state in force when the task's first event happened.
struct InteractionContext {
    std::optional<Artefact> artefact;
    bool feedback = false;
};

/// Artefact active at the final confirmation (or at surrender/completion when
/// nothing was confirmed); feedback is set when it was on at any point.
Expected<InteractionDimension, std::string> derive_interaction(std::span<const SessionEvent> task_events,
                                                               InteractionContext context = {});

}  // namespace cat
