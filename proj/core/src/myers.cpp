#include "myers.hpp"

#include <algorithm>

namespace vfc::detail {

namespace {

class Differ {
 public:
  Differ(std::span<const int> a, std::span<const int> b) : a_(a), b_(b) {}

  std::vector<Edit> run() {
    diff(0, static_cast<int>(a_.size()), 0, static_cast<int>(b_.size()));
    return std::move(out_);
  }

 private:
  void equal(int a, int b) { out_.push_back({EditKind::Equal, a, b}); }
  void del(int a) { out_.push_back({EditKind::Delete, a, -1}); }
  void ins(int b) { out_.push_back({EditKind::Insert, -1, b}); }

  void diff(int a_lo, int a_hi, int b_lo, int b_hi) {
    int prefix = 0;
    while (a_lo + prefix < a_hi && b_lo + prefix < b_hi && a_[a_lo + prefix] == b_[b_lo + prefix])
      ++prefix;
    for (int k = 0; k < prefix; ++k) equal(a_lo + k, b_lo + k);
    a_lo += prefix;
    b_lo += prefix;

    int suffix = 0;
    while (a_hi - suffix > a_lo && b_hi - suffix > b_lo && a_[a_hi - suffix - 1] == b_[b_hi - suffix - 1])
      ++suffix;
    const int a_end = a_hi - suffix;
    const int b_end = b_hi - suffix;

    if (a_lo == a_end) {
      for (int k = b_lo; k < b_end; ++k) ins(k);
    } else if (b_lo == b_end) {
      for (int k = a_lo; k < a_end; ++k) del(k);
    } else {
      bisect(a_lo, a_end, b_lo, b_end);
    }
    for (int k = 0; k < suffix; ++k) equal(a_end + k, b_end + k);
  }

  // Finds the middle snake of a[a_lo, a_hi) x b[b_lo, b_hi) and recurses on
  // both halves. Inputs share no common prefix or suffix and are non-empty.
  void bisect(int a_lo, int a_hi, int b_lo, int b_hi) {
    const int n = a_hi - a_lo;
    const int m = b_hi - b_lo;
    const int max_d = (n + m + 1) / 2;
    const int v_offset = max_d;
    const int v_length = 2 * max_d + 2;
    std::vector<int> v1(v_length, -1);
    std::vector<int> v2(v_length, -1);
    v1[v_offset + 1] = 0;
    v2[v_offset + 1] = 0;
    const int delta = n - m;
    const bool front = (delta % 2 != 0);
    int k1start = 0, k1end = 0, k2start = 0, k2end = 0;

    auto A = [&](int i) { return a_[a_lo + i]; };
    auto B = [&](int j) { return b_[b_lo + j]; };

    for (int d = 0; d < max_d; ++d) {
      for (int k1 = -d + k1start; k1 <= d - k1end; k1 += 2) {
        const int k1_offset = v_offset + k1;
        int x1;
        if (k1 == -d || (k1 != d && v1[k1_offset - 1] < v1[k1_offset + 1]))
          x1 = v1[k1_offset + 1];
        else
          x1 = v1[k1_offset - 1] + 1;
        int y1 = x1 - k1;
        while (x1 < n && y1 < m && A(x1) == B(y1)) {
          ++x1;
          ++y1;
        }
        v1[k1_offset] = x1;
        if (x1 > n) {
          k1end += 2;
        } else if (y1 > m) {
          k1start += 2;
        } else if (front) {
          const int k2_offset = v_offset + delta - k1;
          if (k2_offset >= 0 && k2_offset < v_length && v2[k2_offset] != -1) {
            const int x2 = n - v2[k2_offset];
            if (x1 >= x2) return split(a_lo, a_hi, b_lo, b_hi, x1, y1);
          }
        }
      }
      for (int k2 = -d + k2start; k2 <= d - k2end; k2 += 2) {
        const int k2_offset = v_offset + k2;
        int x2;
        if (k2 == -d || (k2 != d && v2[k2_offset - 1] < v2[k2_offset + 1]))
          x2 = v2[k2_offset + 1];
        else
          x2 = v2[k2_offset - 1] + 1;
        int y2 = x2 - k2;
        while (x2 < n && y2 < m && A(n - x2 - 1) == B(m - y2 - 1)) {
          ++x2;
          ++y2;
        }
        v2[k2_offset] = x2;
        if (x2 > n) {
          k2end += 2;
        } else if (y2 > m) {
          k2start += 2;
        } else if (!front) {
          const int k1_offset = v_offset + delta - k2;
          if (k1_offset >= 0 && k1_offset < v_length && v1[k1_offset] != -1) {
            const int x1 = v1[k1_offset];
            const int y1 = v_offset + x1 - k1_offset;
            if (x1 >= n - x2) return split(a_lo, a_hi, b_lo, b_hi, x1, y1);
          }
        }
      }
    }
    for (int k = a_lo; k < a_hi; ++k) del(k);
    for (int k = b_lo; k < b_hi; ++k) ins(k);
  }

  void split(int a_lo, int a_hi, int b_lo, int b_hi, int x, int y) {
    diff(a_lo, a_lo + x, b_lo, b_lo + y);
    diff(a_lo + x, a_hi, b_lo + y, b_hi);
  }

  std::span<const int> a_;
  std::span<const int> b_;
  std::vector<Edit> out_;
};

}  // namespace

std::vector<Edit> shortest_edit_script(std::span<const int> a, std::span<const int> b) {
  std::vector<Edit> edits = Differ(a, b).run();
  // Within each maximal run of non-equal edits, order deletions first.
  auto it = edits.begin();
  while (it != edits.end()) {
    if (it->kind == EditKind::Equal) {
      ++it;
      continue;
    }
    auto run_end = std::find_if(it, edits.end(), [](const Edit& e) { return e.kind == EditKind::Equal; });
    std::stable_partition(it, run_end, [](const Edit& e) { return e.kind == EditKind::Delete; });
    it = run_end;
  }
  return edits;
}

}  // namespace vfc::detail
