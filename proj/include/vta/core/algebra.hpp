#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "vta/core/operation.hpp"
#include "vta/core/state.hpp"

namespace vta::core {

enum class ApplyErrorKind {
  TargetNotFound,
  IndexOutOfRange,
  DuplicateId,
  StructuralViolation,
  ViewKindMismatch,
};

std::string_view to_string(ApplyErrorKind kind);

/// Raised when a partial transformer is undefined on its input state.
///
/// `param_pointer` locates the offending parameter inside the operation's
/// encoding (e.g. "/params/ids/1"); `position` is the op's 0-based index in
/// the word being applied, when known.
class ApplyError : public std::runtime_error {
 public:
  ApplyError(ApplyErrorKind kind, std::string param_pointer, const std::string& message)
      : std::runtime_error(message), kind_(kind), param_pointer_(std::move(param_pointer)) {}

  ApplyErrorKind kind() const { return kind_; }
  const std::string& param_pointer() const { return param_pointer_; }
  std::optional<std::size_t> position() const { return position_; }

  ApplyError at_position(std::size_t k) const {
    ApplyError copy = *this;
    copy.position_ = k;
    return copy;
  }

  /// Whether the failure is an edge endpoint naming a missing node.
  bool dangling_edge() const { return dangling_edge_; }
  ApplyError& mark_dangling_edge() {
    dangling_edge_ = true;
    return *this;
  }

 private:
  ApplyErrorKind kind_;
  std::string param_pointer_;
  std::optional<std::size_t> position_;
  bool dangling_edge_ = false;
};

/// s . o. Returns the transformed state; `state` is untouched. Throws
/// ApplyError when `op` is undefined on `state`.
VisualState apply_operation(const VisualState& state, const Operation& op);

/// s . (o1 ... on), folded left to right. An ApplyError carries the failing
/// op's position in `word`.
VisualState apply_word(const VisualState& state, std::span<const Operation> word);

OperationWord concat_words(std::span<const Operation> u, std::span<const Operation> v);

/// The operation word of a delta list: every group's ops, in order.
OperationWord flatten_deltas(std::span<const Delta> deltas);

/// Flattened word of a single delta.
OperationWord flatten_delta(const Delta& delta);

/// Element keys an op writes to, prefixed by channel ("value:", "style:",
/// "struct:"). Two ops in one group that share a key conflict.
std::vector<std::string> write_targets(const Operation& op);

}  // namespace vta::core
