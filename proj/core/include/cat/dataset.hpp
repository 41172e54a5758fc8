#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cat/engine.hpp"
#include "cat/events.hpp"
#include "cat/telemetry.hpp"

namespace cat {

// Dataset files (.catlog.jsonl) hold one JSON object per line, each tagged by
// "type":
//   session  session_id, date, canton, school, grade_level, programming_allowed
//   student  student_id, session_id, gender, birth_date | age
//   event    seq, timestamp_ms, student_id, schema_id, kind, payload
//   task     student_id, schema_id, module, attempted, solved, surrendered,
//            abandoned, truncated, duration_ms, dimension, interaction, score,
//            board, program
// Lines appear in that order; events keep log order.

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Dataset {
    std::vector<SessionInfo> sessions;
    std::vector<StudentInfo> students;
    std::vector<SessionEvent> events;
    std::vector<TaskRecord> tasks;
};

std::string to_json_line(const SessionInfo& s);
std::string to_json_line(const StudentInfo& s);
std::string to_json_line(const SessionEvent& e);
std::string to_json_line(const TaskRecord& t);

std::string export_dataset(const SessionInfo& session, const std::vector<StudentInfo>& students,
                           const std::vector<TaskRecord>& records, const std::vector<SessionEvent>& events);
/// Derives the task records from the log and exports everything.
std::string export_log(const EventLog& log, const SchemaCatalog& catalog, const Rubric& rubric = default_rubric());

/// Throws DatasetError on malformed lines.
Dataset parse_dataset(std::string_view text);

struct PseudonymEntry {
    std::string field;
    std::string original;
    std::string code;
    friend bool operator==(const PseudonymEntry&, const PseudonymEntry&) = default;
};

struct PseudonymisedDataset {
    std::string dataset;
    std::vector<PseudonymEntry> mapping;  // kept out of the dataset itself
};

/// Replaces school, canton and grade level with salted codes (S-, K-, G-),
/// re-keys student ids (P-), and turns birth dates into age at the session
/// date. Already-coded values pass through unchanged.
PseudonymisedDataset pseudonymise(std::string_view dataset, std::string_view salt);

std::string mapping_to_csv(const std::vector<PseudonymEntry>& mapping);

}  // namespace cat
