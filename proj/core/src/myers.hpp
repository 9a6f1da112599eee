#pragma once

#include <span>
#include <vector>

namespace vfc::detail {

enum class EditKind { Equal, Delete, Insert };

struct Edit {
  EditKind kind;
  int a;  // index into the first sequence, -1 for Insert
  int b;  // index into the second sequence, -1 for Delete
};

/// Shortest edit script over interned symbols (linear-space bisection).
/// Inside each run of changes deletions come before insertions.
std::vector<Edit> shortest_edit_script(std::span<const int> a, std::span<const int> b);

}  // namespace vfc::detail
