#include "adpr/grid.hpp"

#include <bit>
#include <stdexcept>

namespace adpr {

CellSet::CellSet(int cols, int rows) : cols_(cols), rows_(rows) {
  if (cols < 0 || rows < 0) throw std::invalid_argument("negative grid size");
  words_.assign((static_cast<std::size_t>(cols) * rows + 63) / 64, 0);
}

void CellSet::set(Cell c) {
  if (!in_bounds(c)) throw std::out_of_range("cell outside grid");
  const int i = index(c);
  words_[i >> 6] |= 1ULL << (i & 63);
}

void CellSet::reset(Cell c) {
  if (!in_bounds(c)) throw std::out_of_range("cell outside grid");
  const int i = index(c);
  words_[i >> 6] &= ~(1ULL << (i & 63));
}

bool CellSet::test(Cell c) const {
  if (!in_bounds(c)) return false;
  const int i = index(c);
  return (words_[i >> 6] >> (i & 63)) & 1;
}

std::size_t CellSet::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

bool CellSet::intersects(const CellSet& o) const {
  if (!same_universe(o)) throw std::invalid_argument("universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & o.words_[i]) return true;
  return false;
}

bool CellSet::is_subset_of(const CellSet& o) const {
  if (!same_universe(o)) throw std::invalid_argument("universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

CellSet& CellSet::operator|=(const CellSet& o) {
  if (!same_universe(o)) throw std::invalid_argument("universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

CellSet& CellSet::operator&=(const CellSet& o) {
  if (!same_universe(o)) throw std::invalid_argument("universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

CellSet& CellSet::subtract(const CellSet& o) {
  if (!same_universe(o)) throw std::invalid_argument("universe mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

std::vector<Cell> CellSet::cells() const {
  std::vector<Cell> out;
  out.reserve(count());
  for_each([&](Cell c) { out.push_back(c); });
  return out;
}

std::size_t CellSet::hash() const {
  std::size_t h = static_cast<std::size_t>(cols_) * 1000003u + rows_;
  for (std::uint64_t w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool is_connected(const CellSet& s) {
  const std::vector<Cell> cells = s.cells();
  if (cells.size() <= 1) return true;

  CellSet seen(s.grid_cols(), s.grid_rows());
  std::vector<Cell> stack;
  stack.push_back(cells.front());
  seen.set(cells.front());
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    const Cell nbrs[4] = {{c.col - 1, c.row}, {c.col + 1, c.row},
                          {c.col, c.row - 1}, {c.col, c.row + 1}};
    for (const Cell n : nbrs) {
      if (s.test(n) && !seen.test(n)) {
        seen.set(n);
        ++reached;
        stack.push_back(n);
      }
    }
  }
  return reached == cells.size();
}

}  // namespace adpr
