#include "rsr/encoding.hpp"

namespace rsr {

EncodedBatch::EncodedBatch(EncodingKind kind, int n_components, int n_states)
    : kind_(kind), n_components_(n_components), n_states_(n_states) {
  if (n_components < 1 || n_states < 1) throw EncodingError("encoded shape must be positive");
  words_per_row_ = (n_components * n_states + 63) / 64;
}

EncodedBatch EncodedBatch::from_states(EncodingKind kind, const StateMatrix& states, int n_states) {
  EncodedBatch out(kind, static_cast<int>(states.cols()), n_states);
  out.reserve(states.rows());
  for (Eigen::Index h = 0; h < states.rows(); ++h)
    out.append({states.data() + h * states.cols(), static_cast<std::size_t>(states.cols())});
  return out;
}

EncodedBatch EncodedBatch::from_vectors(EncodingKind kind, std::span<const StateVector> vectors,
                                        int n_components, int n_states) {
  EncodedBatch out(kind, n_components, n_states);
  out.reserve(static_cast<std::int64_t>(vectors.size()));
  for (const auto& v : vectors) out.append(v);
  return out;
}

void EncodedBatch::append(StateView x) {
  if (static_cast<int>(x.size()) != n_components_)
    throw EncodingError("vector length " + std::to_string(x.size()) + " does not match N=" +
                        std::to_string(n_components_));
  detail::check_states(x, n_states_);
  const std::size_t base = words_.size();
  words_.resize(base + words_per_row_, 0);
  std::uint64_t* row = words_.data() + base;
  auto set_bit = [row](int j) { row[j / 64] |= std::uint64_t{1} << (j % 64); };
  for (int n = 0; n < n_components_; ++n) {
    const int offset = n * n_states_;
    const int s = x[n];
    switch (kind_) {
      case EncodingKind::Sample: set_bit(offset + s); break;
      case EncodingKind::LowerRef:
        for (int m = 0; m <= s; ++m) set_bit(offset + m);
        break;
      case EncodingKind::UpperRef:
        for (int m = s; m < n_states_; ++m) set_bit(offset + m);
        break;
    }
  }
  ++rows_;
}

std::vector<std::uint64_t> EncodedBatch::complement_words() const {
  std::vector<std::uint64_t> out(words_.size());
  const int tail_bits = n_columns() % 64;
  const std::uint64_t tail_mask = tail_bits == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << tail_bits) - 1;
  for (std::int64_t r = 0; r < rows_; ++r) {
    for (int w = 0; w < words_per_row_; ++w) {
      const std::size_t i = static_cast<std::size_t>(r * words_per_row_ + w);
      out[i] = ~words_[i];
    }
    out[static_cast<std::size_t>(r * words_per_row_ + words_per_row_ - 1)] &= tail_mask;
  }
  return out;
}

StateMatrix decode_samples(const EncodedBatch& batch) {
  if (batch.kind() != EncodingKind::Sample) throw EncodingError("decode expects a sample batch");
  StateMatrix out(batch.rows(), batch.n_components());
  for (std::int64_t h = 0; h < batch.rows(); ++h)
    for (int n = 0; n < batch.n_components(); ++n) {
      int found = -1;
      for (int m = 0; m < batch.n_states() && found < 0; ++m)
        if (batch.test(h, n * batch.n_states() + m)) found = m;
      if (found < 0) throw EncodingError("sample row has no set state");
      out(h, n) = static_cast<State>(found);
    }
  return out;
}

}  // namespace rsr
