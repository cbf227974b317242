#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace csl {

// Shortest decimal string that round-trips to the same double.
inline std::string double_repr(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// Fixed-edge counting histogram.  Merging two histograms with identical
// edges is an integer add, so any merge order gives identical counts.
class Histogram {
 public:
  enum class Scale { Linear, Log };

  Histogram() = default;

  Histogram(double lo, double hi, int bins, Scale scale = Scale::Linear)
      : lo_(lo), hi_(hi), bins_(bins), scale_(scale), counts_(bins, 0) {
    if (bins < 1 || !(hi > lo))
      throw std::invalid_argument("Histogram: need bins >= 1 and hi > lo");
    if (scale == Scale::Log && !(lo > 0.0))
      throw std::invalid_argument("Histogram: log scale needs lo > 0");
    if (scale == Scale::Log) {
      log_lo_ = std::log(lo);
      inv_step_ = bins / (std::log(hi) - log_lo_);
    } else {
      inv_step_ = bins / (hi - lo);
    }
  }

  void add(double x) {
    if (!(x >= lo_)) {
      ++under_;
      return;
    }
    if (!(x < hi_)) {
      ++over_;
      return;
    }
    const double t = (scale_ == Scale::Log) ? (std::log(x) - log_lo_) * inv_step_
                                            : (x - lo_) * inv_step_;
    int i = static_cast<int>(t);
    if (i >= bins_) i = bins_ - 1;
    ++counts_[i];
  }

  bool compatible(const Histogram& o) const {
    return lo_ == o.lo_ && hi_ == o.hi_ && bins_ == o.bins_ &&
           scale_ == o.scale_;
  }

  // Replaces the counters wholesale; for deserialization.
  void restore(std::vector<std::uint64_t> counts, std::uint64_t under,
               std::uint64_t over) {
    if (static_cast<int>(counts.size()) != bins_)
      throw std::invalid_argument("Histogram::restore: count size mismatch");
    counts_ = std::move(counts);
    under_ = under;
    over_ = over;
  }

  void merge(const Histogram& o) {
    if (!compatible(o))
      throw std::invalid_argument("Histogram::merge: incompatible shapes");
    for (int i = 0; i < bins_; ++i) counts_[i] += o.counts_[i];
    under_ += o.under_;
    over_ += o.over_;
  }

  int bins() const { return bins_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Scale scale() const { return scale_; }
  std::uint64_t count(int i) const { return counts_[i]; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t underflow() const { return under_; }
  std::uint64_t overflow() const { return over_; }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (std::uint64_t c : counts_) t += c;
    return t;
  }

  double left_edge(int i) const {
    if (scale_ == Scale::Log)
      return std::exp(log_lo_ + i / inv_step_);
    return lo_ + i / inv_step_;
  }
  double right_edge(int i) const { return (i + 1 == bins_) ? hi_ : left_edge(i + 1); }
  double mid(int i) const { return 0.5 * (left_edge(i) + right_edge(i)); }

  // Normalized over in-range events only.
  double density(int i, std::uint64_t routed_total) const {
    const double w = right_edge(i) - left_edge(i);
    if (routed_total == 0 || w <= 0.0) return 0.0;
    return static_cast<double>(counts_[i]) / (static_cast<double>(routed_total) * w);
  }
  double density(int i) const { return density(i, total()); }

  void write_csv(std::ostream& os) const {
    os << "bin_left,bin_mid,bin_right,count,density\n";
    const std::uint64_t t = total();
    for (int i = 0; i < bins_; ++i) {
      os << double_repr(left_edge(i)) << ',' << double_repr(mid(i)) << ','
         << double_repr(right_edge(i)) << ',' << counts_[i] << ','
         << double_repr(density(i, t)) << '\n';
    }
  }

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  int bins_ = 0;
  Scale scale_ = Scale::Linear;
  double log_lo_ = 0.0;
  double inv_step_ = 1.0;
  std::vector<std::uint64_t> counts_;
  std::uint64_t under_ = 0;
  std::uint64_t over_ = 0;
};

}  // namespace csl
