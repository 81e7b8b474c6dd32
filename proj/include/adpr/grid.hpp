#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace adpr {

// One allocation cell: a column crossed with one clock-region row.
struct Cell {
  int col = 0;
  int row = 0;
  auto operator<=>(const Cell&) const = default;
};

// Set of cells over a fixed cols x rows universe, stored as a bitset in
// column-major order so ascending bit index equals the canonical
// (column, then row) cell ordering used for serialization.
class CellSet {
public:
  CellSet() = default;
  CellSet(int cols, int rows);

  int grid_cols() const { return cols_; }
  int grid_rows() const { return rows_; }
  bool same_universe(const CellSet& o) const {
    return cols_ == o.cols_ && rows_ == o.rows_;
  }

  bool in_bounds(Cell c) const {
    return c.col >= 0 && c.col < cols_ && c.row >= 0 && c.row < rows_;
  }

  void set(Cell c);
  void reset(Cell c);
  bool test(Cell c) const;

  std::size_t count() const;
  bool empty() const { return count() == 0; }

  bool intersects(const CellSet& o) const;
  bool is_subset_of(const CellSet& o) const;

  CellSet& operator|=(const CellSet& o);
  CellSet& operator&=(const CellSet& o);
  CellSet& subtract(const CellSet& o);

  friend bool operator==(const CellSet&, const CellSet&) = default;

  // Cells in canonical order.
  std::vector<Cell> cells() const;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (int w = 0; w < static_cast<int>(words_.size()); ++w) {
      std::uint64_t word = words_[w];
      while (word != 0) {
        const int bit = __builtin_ctzll(word);
        word &= word - 1;
        const int idx = w * 64 + bit;
        fn(Cell{idx / rows_, idx % rows_});
      }
    }
  }

  std::size_t hash() const;

private:
  int index(Cell c) const { return c.col * rows_ + c.row; }

  int cols_ = 0;
  int rows_ = 0;
  std::vector<std::uint64_t> words_;
};

// 4-neighborhood connectivity; the empty set counts as connected.
bool is_connected(const CellSet& s);

}  // namespace adpr
