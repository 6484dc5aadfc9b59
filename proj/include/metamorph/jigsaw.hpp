#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <metamorph/colist.hpp>

namespace metamorph {

// The jigsaw evaluators work purely on edge values: a piece consumes an input
// edge from above and an output edge from the right, and yields the output
// edge leaving left and the input edge passed down.  No evaluator here takes
// an algebra or coalgebra; states never enter the computation.
template <typename A, typename B>
struct Piece {
  std::function<std::pair<B, A>(const A&, const B&)> place;
};

enum class Flatness { Flat, NotFlat };

// Decides, per input element, whether absorbing it can ever create output
// where there was none: Flat elements cannot, NotFlat elements always do.
template <typename A>
struct FlatClassifier {
  std::function<Flatness(const A&)> classify;
};

// Deconstructing an ended column where the infinite evaluators require more
// output is a contract violation, reported on demand.
struct EndedColumn : std::logic_error {
  EndedColumn() : std::logic_error("ended column in infinite jigsaw") {}
};

//===========================================================================
// Horizontal placement: one full row at a time.
//===========================================================================

// Lays one row of pieces right to left against the straight edge.  Returns
// the edge leaving the row on the left and the bottom edges, which form the
// next row's input.
template <typename A, typename B>
std::pair<B, std::vector<A>> fill_row(const Piece<A, B>& piece, const B& straight,
                                      const std::vector<A>& row) {
  B edge = straight;
  std::vector<A> bottoms;
  bottoms.reserve(row.size());
  for (std::size_t i = row.size(); i-- > 0;) {
    auto [left, bottom] = piece.place(row[i], edge);
    bottoms.push_back(std::move(bottom));
    edge = std::move(left);
  }
  std::reverse(bottoms.begin(), bottoms.end());
  return {std::move(edge), std::move(bottoms)};
}

// Emits one output per completed row, forever; the board extends downward
// without end, so the result never ends either.
template <typename A, typename B>
Colist<B> jigsaw_horizontal(Piece<A, B> piece, B straight, std::vector<A> row) {
  return Colist<B>::defer([piece = std::move(piece), straight = std::move(straight),
                           row = std::move(row)]() -> typename Colist<B>::Step {
    auto [edge, next_row] = fill_row(piece, straight, row);
    return std::make_pair(std::move(edge),
                          jigsaw_horizontal(piece, straight, std::move(next_row)));
  });
}

//===========================================================================
// Vertical placement: one full column at a time.
//===========================================================================

// Lays the column of pieces for one input element against the column of
// edges to its right.  The column must never end; hitting End throws.
template <typename A, typename B>
Colist<B> fill_column(Piece<A, B> piece, A top, Colist<B> column) {
  return Colist<B>::defer([piece = std::move(piece), top = std::move(top),
                           column = std::move(column)]() -> typename Colist<B>::Step {
    auto step = column.uncons();
    if (!step) throw EndedColumn();
    auto [left, bottom] = piece.place(top, step->first);
    return std::make_pair(std::move(left),
                          fill_column(piece, std::move(bottom), std::move(step->second)));
  });
}

// Stacks the columns right to left.  The empty board is the constant column
// of straight edges, shared self-referentially so that deconstructing it any
// number of times costs O(1).
template <typename A, typename B>
Colist<B> jigsaw_vertical(const Piece<A, B>& piece, const B& straight,
                          const std::vector<A>& input) {
  Colist<B> board = Colist<B>::repeat(straight);
  for (std::size_t i = input.size(); i-- > 0;) board = fill_column(piece, input[i], board);
  return board;
}

//===========================================================================
// General placement: columns may end.
//===========================================================================

// Vertical placement where the neighbouring column may end.  A Flat element
// ends its own column at the same height; a NotFlat element extends it one
// piece against the straight edge and then continues against the same ended
// column, so successive NotFlat placements keep lengthening the output.
template <typename A, typename B>
Colist<B> fill_column_general(Piece<A, B> piece, B straight, FlatClassifier<A> flat,
                              A top, Colist<B> column) {
  return Colist<B>::defer([piece = std::move(piece), straight = std::move(straight),
                           flat = std::move(flat), top = std::move(top),
                           column = std::move(column)]() -> typename Colist<B>::Step {
    auto step = column.uncons();
    if (!step) {
      if (flat.classify(top) == Flatness::Flat) return std::nullopt;
      auto [left, bottom] = piece.place(top, straight);
      return std::make_pair(std::move(left),
                            fill_column_general(piece, straight, flat, std::move(bottom),
                                                column));
    }
    auto [left, bottom] = piece.place(top, step->first);
    return std::make_pair(std::move(left),
                          fill_column_general(piece, straight, flat, std::move(bottom),
                                              std::move(step->second)));
  });
}

// The empty board is the ended column; output ends exactly when the placed
// columns stop extending it.
template <typename A, typename B>
Colist<B> jigsaw_general(const Piece<A, B>& piece, const B& straight,
                         const FlatClassifier<A>& flat, const std::vector<A>& input) {
  Colist<B> board = Colist<B>::end();
  for (std::size_t i = input.size(); i-- > 0;)
    board = fill_column_general(piece, straight, flat, input[i], board);
  return board;
}

//===========================================================================
// Board tracing: the same placements, recorded instead of streamed.
//===========================================================================

template <typename A, typename B>
struct PlacedPiece {
  A top;
  B right;
  B left;
  A bottom;
};

// `rows` lists pieces left to right; row r+1's tops are row r's bottoms.
// The right boundary of every row is the straight edge; left_boundary[r] is
// the edge leaving row r, i.e. the r-th output.
template <typename A, typename B>
struct BoardTrace {
  std::vector<A> top_boundary;
  std::vector<std::vector<PlacedPiece<A, B>>> rows;
  std::vector<B> left_boundary;
};

template <typename A, typename B>
BoardTrace<A, B> board_trace(const Piece<A, B>& piece, const B& straight,
                             std::vector<A> input, std::size_t rows) {
  BoardTrace<A, B> trace;
  trace.top_boundary = input;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<PlacedPiece<A, B>> placed;
    placed.reserve(input.size());
    B edge = straight;
    for (std::size_t i = input.size(); i-- > 0;) {
      auto [left, bottom] = piece.place(input[i], edge);
      placed.push_back(PlacedPiece<A, B>{input[i], edge, left, bottom});
      edge = std::move(left);
    }
    std::reverse(placed.begin(), placed.end());
    std::vector<A> next_row;
    next_row.reserve(placed.size());
    for (const auto& p : placed) next_row.push_back(p.bottom);
    trace.rows.push_back(std::move(placed));
    trace.left_boundary.push_back(std::move(edge));
    input = std::move(next_row);
  }
  return trace;
}

}  // namespace metamorph
