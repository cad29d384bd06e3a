#pragma once
// Random inputs and brute-force oracles shared by the unit and acceptance suites.

#include <random>
#include <string>
#include <vector>

#include "vta/core/operation.hpp"
#include "vta/core/state.hpp"
#include "vta/trackers/trackers.hpp"

namespace vta::testing {

using Rng = std::mt19937_64;

/// A compatible random task for the tracker, within small fixed bounds.
trackers::TaskSpec random_task(const std::string& tracker, Rng& rng);

/// Compares a replayed final state against an oracle computed from the task
/// alone. Returns an empty string on agreement, otherwise what differed.
std::string check_oracle(const std::string& tracker, const trackers::TaskSpec& task,
                         const std::vector<core::Operation>& word, const core::VisualState& final_state);

/// Random array or graph state with at most `max_elements` elements.
core::VisualState random_state(Rng& rng, int max_elements = 8);

/// Random op for the state's sort plus the generic ops. Parameters are drawn
/// near the state's contents, so most apply and some do not.
core::Operation random_op(const core::VisualState& s, Rng& rng);
std::vector<core::Operation> random_word(const core::VisualState& s, Rng& rng, int max_len = 8);

/// Random rsl.json text: mostly broken or at a bound, sometimes fine.
std::string random_rsl(Rng& rng);

}  // namespace vta::testing
