#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vta/core/state.hpp"
#include "vta/core/value.hpp"

namespace vta::core {

// Closed operation catalogue. The enumerator order matches the alternatives of
// `Params` below; `Operation::code()` relies on that.
enum class OpCode {
  UpdateStyle,
  MoveElements,
  ShiftElements,
  UpdateValues,
  SetPointer,
  ClearPointer,
  UpdateNodeStyle,
  UpdateNodeProperties,
  UpdateEdgeStyle,
  AddNode,
  RemoveNode,
  AddChild,
  Reparent,
  Rotate,
  InsertIntoBucket,
  Rehash,
  HighlightCollision,
  UpdateTableCell,
  HighlightTableCell,
  ShowDependency,
  ShowComment,
  HideComment,
  AppendToList,
  PopFromList,
};

inline constexpr std::size_t kOpCodeCount = 24;

std::string_view to_string(OpCode code);
std::optional<OpCode> op_code_from_string(std::string_view name);
std::span<const OpCode> all_op_codes();

/// Sort an op is restricted to, or nullopt for the generic ops.
std::optional<ViewSort> required_sort(OpCode code);

struct IndexMove {
  std::int64_t from = 0;
  std::int64_t to = 0;
  bool operator==(const IndexMove&) const = default;
};

/// Half-open index range [start, end).
struct IndexRange {
  std::int64_t start = 0;
  std::int64_t end = 0;
  bool operator==(const IndexRange&) const = default;
};

struct IndexAssignment {
  std::int64_t index = 0;
  Value value;
  bool operator==(const IndexAssignment&) const = default;
};

struct EdgeRef {
  std::string from;
  std::string to;
  bool operator==(const EdgeRef&) const = default;
};

struct CellRef {
  std::int64_t row = 0;
  std::int64_t col = 0;
  auto operator<=>(const CellRef&) const = default;
};

struct KeyPlacement {
  Value key;
  std::int64_t bucket = 0;
  bool operator==(const KeyPlacement&) const = default;
};

struct TreeNodeRecord {
  std::string id;
  std::string label;
  std::string style_key{kIdleStyle};
  bool operator==(const TreeNodeRecord&) const = default;
};

enum class RotateDirection { Left, Right };
enum class ListEnd { Front, Back };

namespace op {

struct UpdateStyle {
  std::vector<std::int64_t> indices;
  std::string style_key;
  bool operator==(const UpdateStyle&) const = default;
};
/// Simultaneous relocation: every destination receives its source's element
/// as it was before the op. Sources that are not destinations keep their content.
struct MoveElements {
  std::vector<IndexMove> pairs;
  bool operator==(const MoveElements&) const = default;
};
/// Translate [range.start, range.end) by `offset`; vacated slots become null/idle.
struct ShiftElements {
  IndexRange range;
  std::int64_t offset = 0;
  bool operator==(const ShiftElements&) const = default;
};
struct UpdateValues {
  std::vector<IndexAssignment> assignments;
  bool operator==(const UpdateValues&) const = default;
};
struct SetPointer {
  std::string name;
  std::optional<std::int64_t> index;  // nullopt detaches
  bool operator==(const SetPointer&) const = default;
};
struct ClearPointer {
  std::string name;
  bool operator==(const ClearPointer&) const = default;
};
struct UpdateNodeStyle {
  std::vector<std::string> ids;
  std::string style_key;
  bool operator==(const UpdateNodeStyle&) const = default;
};
/// Merges `properties` into the node's property map.
struct UpdateNodeProperties {
  std::string id;
  PropertyMap properties;
  bool operator==(const UpdateNodeProperties&) const = default;
};
struct UpdateEdgeStyle {
  std::vector<EdgeRef> edges;
  std::string style_key;
  bool operator==(const UpdateEdgeStyle&) const = default;
};
struct AddNode {
  GraphNode node;
  bool operator==(const AddNode&) const = default;
};
/// Also drops every edge incident to the node.
struct RemoveNode {
  std::string id;
  bool operator==(const RemoveNode&) const = default;
};
/// `parent` may be null only when the tree is empty (the node becomes the root).
struct AddChild {
  std::optional<std::string> parent;
  TreeNodeRecord node;
  std::int64_t position = 0;
  bool operator==(const AddChild&) const = default;
};
struct Reparent {
  std::string id;
  std::string new_parent;
  std::int64_t position = 0;
  bool operator==(const Reparent&) const = default;
};
struct Rotate {
  std::string pivot;
  RotateDirection direction = RotateDirection::Left;
  bool operator==(const Rotate&) const = default;
};
struct InsertIntoBucket {
  std::int64_t bucket = 0;
  Value key;
  Value value;
  bool operator==(const InsertIntoBucket&) const = default;
};
/// The placement list is authoritative: it must name every stored key exactly once.
struct Rehash {
  std::int64_t new_capacity = 1;
  std::vector<KeyPlacement> placement;
  bool operator==(const Rehash&) const = default;
};
struct HighlightCollision {
  std::int64_t bucket = 0;
  std::string style_key;
  bool operator==(const HighlightCollision&) const = default;
};
struct UpdateTableCell {
  std::int64_t row = 0;
  std::int64_t col = 0;
  Value value;
  bool operator==(const UpdateTableCell&) const = default;
};
struct HighlightTableCell {
  std::vector<CellRef> cells;
  std::string style_key;
  bool operator==(const HighlightTableCell&) const = default;
};
/// State-neutral overlay; only checks that both cells exist.
struct ShowDependency {
  CellRef from;
  CellRef to;
  bool operator==(const ShowDependency&) const = default;
};
struct ShowComment {
  std::string id;
  std::string text;
  std::optional<Anchor> anchor;
  bool operator==(const ShowComment&) const = default;
};
struct HideComment {
  std::string id;
  bool operator==(const HideComment&) const = default;
};
/// For map views the entry carries a key and replaces an existing entry with that key.
struct AppendToList {
  std::string view;
  AuxEntry entry;
  bool operator==(const AppendToList&) const = default;
};
struct PopFromList {
  std::string view;
  ListEnd end = ListEnd::Back;
  bool operator==(const PopFromList&) const = default;
};

}  // namespace op

using Params = std::variant<op::UpdateStyle, op::MoveElements, op::ShiftElements,
                            op::UpdateValues, op::SetPointer, op::ClearPointer,
                            op::UpdateNodeStyle, op::UpdateNodeProperties, op::UpdateEdgeStyle,
                            op::AddNode, op::RemoveNode, op::AddChild, op::Reparent, op::Rotate,
                            op::InsertIntoBucket, op::Rehash, op::HighlightCollision,
                            op::UpdateTableCell, op::HighlightTableCell, op::ShowDependency,
                            op::ShowComment, op::HideComment, op::AppendToList, op::PopFromList>;

static_assert(std::variant_size_v<Params> == kOpCodeCount);

/// A primitive operation symbol with its typed parameters.
struct Operation {
  Params params;

  Operation() = default;
  template <typename P>
    requires std::is_constructible_v<Params, P&&>
  Operation(P&& p) : params(std::forward<P>(p)) {}  // NOLINT(google-explicit-constructor)

  OpCode code() const { return static_cast<OpCode>(params.index()); }

  template <typename P>
  const P* get() const {
    return std::get_if<P>(&params);
  }

  bool operator==(const Operation&) const = default;
};

/// Element of the free monoid over the catalogue.
using OperationWord = std::vector<Operation>;

/// Operations within one group are logically simultaneous.
using OpGroup = std::vector<Operation>;

struct Delta {
  std::string action_description;
  std::vector<int> code_highlight;  // 1-based pseudocode lines
  std::vector<OpGroup> operations;
  bool operator==(const Delta&) const = default;
};

}  // namespace vta::core
