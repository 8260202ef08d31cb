#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "rsr/model.hpp"
#include "rsr/sampling.hpp"

namespace rsr {

/// Which event an encoded N x M matrix represents. Column m of row n is 1
/// iff state m of component n belongs to the event:
///   Sample    m == x_n         (one-hot)
///   LowerRef  m <= x_n         (prefix of ones)
///   UpperRef  m >= x_n         (suffix of ones)
enum class EncodingKind { Sample, LowerRef, UpperRef };

template <typename Scalar>
using BinaryMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class EncodingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void check_states(StateView x, int n_states) {
  if (n_states < 1) throw EncodingError("number of states must be positive");
  for (std::size_t n = 0; n < x.size(); ++n)
    if (x[n] >= n_states)
      throw EncodingError("component " + std::to_string(n) + " state " + std::to_string(int{x[n]}) +
                          " is outside [0, " + std::to_string(n_states - 1) + "]");
}

inline bool entry_set(EncodingKind kind, int m, int state) {
  switch (kind) {
    case EncodingKind::Sample: return m == state;
    case EncodingKind::LowerRef: return m <= state;
    case EncodingKind::UpperRef: return m >= state;
  }
  return false;
}

}  // namespace detail

template <typename Scalar = std::uint8_t>
BinaryMatrix<Scalar> encode(StateView x, int n_states, EncodingKind kind) {
  detail::check_states(x, n_states);
  BinaryMatrix<Scalar> out(static_cast<Eigen::Index>(x.size()), n_states);
  for (Eigen::Index n = 0; n < out.rows(); ++n)
    for (int m = 0; m < n_states; ++m)
      out(n, m) = detail::entry_set(kind, m, x[n]) ? Scalar(1) : Scalar(0);
  return out;
}

template <typename Scalar = std::uint8_t>
BinaryMatrix<Scalar> encode_sample(StateView x, int n_states) {
  return encode<Scalar>(x, n_states, EncodingKind::Sample);
}

template <typename Scalar = std::uint8_t>
BinaryMatrix<Scalar> encode_lower_ref(StateView x, int n_states) {
  return encode<Scalar>(x, n_states, EncodingKind::LowerRef);
}

template <typename Scalar = std::uint8_t>
BinaryMatrix<Scalar> encode_upper_ref(StateView x, int n_states) {
  return encode<Scalar>(x, n_states, EncodingKind::UpperRef);
}

/// Stacks the row-major flattening of each N x M matrix as one row.
template <typename Scalar>
BinaryMatrix<Scalar> flatten_dense(std::span<const BinaryMatrix<Scalar>> items, int n_components,
                                   int n_states) {
  BinaryMatrix<Scalar> out(static_cast<Eigen::Index>(items.size()),
                           static_cast<Eigen::Index>(n_components) * n_states);
  for (std::size_t h = 0; h < items.size(); ++h) {
    const auto& item = items[h];
    if (item.rows() != n_components || item.cols() != n_states)
      throw EncodingError("item " + std::to_string(h) + " is " + std::to_string(item.rows()) + "x" +
                          std::to_string(item.cols()) + ", expected " +
                          std::to_string(n_components) + "x" + std::to_string(n_states));
    out.row(static_cast<Eigen::Index>(h)) =
        Eigen::Map<const Eigen::Matrix<Scalar, 1, Eigen::Dynamic>>(item.data(), item.size());
  }
  return out;
}

/// Bit-packed flattened batch. Row r occupies `words_per_row()` 64-bit
/// words; flattened column j = n * M + m lives in word j / 64, bit j % 64.
/// Padding bits past N * M are always zero.
class EncodedBatch {
 public:
  EncodedBatch(EncodingKind kind, int n_components, int n_states);

  /// Encodes every row of `states`.
  static EncodedBatch from_states(EncodingKind kind, const StateMatrix& states, int n_states);
  static EncodedBatch from_vectors(EncodingKind kind, std::span<const StateVector> vectors,
                                   int n_components, int n_states);

  void append(StateView x);
  void reserve(std::int64_t rows) { words_.reserve(static_cast<std::size_t>(rows) * words_per_row_); }

  EncodingKind kind() const { return kind_; }
  int n_components() const { return n_components_; }
  int n_states() const { return n_states_; }
  int n_columns() const { return n_components_ * n_states_; }
  std::int64_t rows() const { return rows_; }
  int words_per_row() const { return words_per_row_; }

  std::span<const std::uint64_t> row_words(std::int64_t r) const {
    return {words_.data() + r * words_per_row_, static_cast<std::size_t>(words_per_row_)};
  }
  bool test(std::int64_t r, int column) const {
    return (words_[r * words_per_row_ + column / 64] >> (column % 64)) & 1U;
  }

  /// Row words of the elementwise complement, padding kept at zero.
  std::vector<std::uint64_t> complement_words() const;

  template <typename Scalar = std::uint8_t>
  BinaryMatrix<Scalar> to_dense() const {
    BinaryMatrix<Scalar> out(rows_, n_columns());
    for (std::int64_t r = 0; r < rows_; ++r)
      for (int j = 0; j < n_columns(); ++j) out(r, j) = test(r, j) ? Scalar(1) : Scalar(0);
    return out;
  }

  friend bool operator==(const EncodedBatch&, const EncodedBatch&) = default;

 private:
  EncodingKind kind_;
  int n_components_;
  int n_states_;
  int words_per_row_;
  std::int64_t rows_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Packs dense N x M matrices, checking the row pattern of `kind`.
template <typename Scalar>
EncodedBatch flatten(std::span<const BinaryMatrix<Scalar>> items, EncodingKind kind,
                     int n_components, int n_states) {
  const BinaryMatrix<Scalar> dense = flatten_dense(items, n_components, n_states);
  EncodedBatch out(kind, n_components, n_states);
  StateVector x(n_components);
  for (Eigen::Index h = 0; h < dense.rows(); ++h) {
    for (int n = 0; n < n_components; ++n) {
      int ones = 0, first = -1, last = -1;
      for (int m = 0; m < n_states; ++m) {
        const Scalar v = dense(h, static_cast<Eigen::Index>(n) * n_states + m);
        if (v != Scalar(0) && v != Scalar(1)) throw EncodingError("matrix entries must be binary");
        if (v == Scalar(1)) {
          ++ones;
          if (first < 0) first = m;
          last = m;
        }
      }
      const bool contiguous = ones > 0 && last - first + 1 == ones;
      bool ok = false;
      switch (kind) {
        case EncodingKind::Sample: ok = ones == 1; x[n] = static_cast<State>(first); break;
        case EncodingKind::LowerRef: ok = contiguous && first == 0; x[n] = static_cast<State>(last); break;
        case EncodingKind::UpperRef: ok = contiguous && last == n_states - 1; x[n] = static_cast<State>(first); break;
      }
      if (!ok)
        throw EncodingError("item " + std::to_string(h) + " row " + std::to_string(n) +
                            " does not match the encoding pattern");
    }
    out.append(x);
  }
  return out;
}

/// Inverse of a sample encoding: the one-hot position per component.
StateMatrix decode_samples(const EncodedBatch& batch);

}  // namespace rsr
