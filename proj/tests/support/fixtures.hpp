#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "cat/analysis.hpp"
#include "cat/dataset.hpp"
#include "cat/service.hpp"

namespace fixtures {

inline constexpr std::int64_t kMinute = 60000;

cat::StudentInfo student(const std::string& id, std::optional<int> age);
cat::TaskRecord task(const std::string& student, const std::string& schema, bool attempted, bool solved,
                     std::int64_t duration_ms = 0, const char* dimension = nullptr, const char* interaction = nullptr);

/// Two G pupils (10 and 20 minutes over several schemas), one GF pupil, no P or PF.
cat::Dataset time_dataset();
/// V01: 22/24 among 10-13, 3/6 among 3-6 plus non-attempts; V02: 10-13 only, one pupil of unknown age.
cat::Dataset success_dataset();
/// Group 10-13: 2x(D1,G) 2x(D2,P). Group 3-6: (D0,GF) (D1,G) (D2,PF).
cat::Dataset strategy_dataset();

/// Monotone fake clock advancing a pseudo-random 1..90 s per reading.
cat::EventLog::Clock step_clock(std::uint64_t seed);

/// paintMultipleCells text colouring all 20 cells as the schema does.
std::string solving_command(const cat::Schema& s);

/// Stable sort by student id, keeping each student's catalog order.
std::vector<cat::TaskRecord> by_student(std::vector<cat::TaskRecord> records);

/// Drives random actions against a fresh session and returns its id.
/// The session is left open.
std::string random_session(cat::Service& svc, std::uint64_t seed, int students, int steps);

}  // namespace fixtures
