#ifndef BTRATE_RATING_HPP_
#define BTRATE_RATING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "btrate/error.hpp"

namespace btrate {

/// Scale convention for a rating vector. Ratings are only identified up to a
/// positive multiple, so every reported vector declares which one it uses.
class Normalization {
 public:
  enum class Kind { reference, sum_to_one, geometric_mean_one };

  /// Reference item = the last item of whatever vector is normalized.
  Normalization() = default;

  static Normalization reference(std::string label) {
    Normalization n;
    n.label_ = std::move(label);
    return n;
  }
  static Normalization last_item() { return Normalization{}; }
  static Normalization sum_to_one() {
    Normalization n;
    n.kind_ = Kind::sum_to_one;
    return n;
  }
  static Normalization geometric_mean_one() {
    Normalization n;
    n.kind_ = Kind::geometric_mean_one;
    return n;
  }

  /// Parses `ref:<label>`, `sum1`, `geomean1` (and `ref` for the last item).
  static Normalization parse(std::string_view text) {
    if (text == "sum1") return sum_to_one();
    if (text == "geomean1") return geometric_mean_one();
    if (text == "ref" || text == "last") return last_item();
    if (text.rfind("ref:", 0) == 0 && text.size() > 4) {
      return reference(std::string(text.substr(4)));
    }
    throw InvalidInput("unknown normalization '" + std::string(text) +
                       "' (expected ref:<label>, sum1 or geomean1)");
  }

  Kind kind() const { return kind_; }
  /// Empty for the last-item default.
  const std::string& label() const { return label_; }

  std::string to_string() const {
    switch (kind_) {
      case Kind::sum_to_one: return "sum1";
      case Kind::geometric_mean_one: return "geomean1";
      case Kind::reference: break;
    }
    return label_.empty() ? std::string("ref") : "ref:" + label_;
  }

  /// Binds the last-item default to a concrete label.
  Normalization resolved(const std::vector<std::string>& items) const {
    if (kind_ == Kind::reference && label_.empty() && !items.empty()) {
      return reference(items.back());
    }
    return *this;
  }

  /// Rescales `values` in place. All values must be positive and finite.
  void apply(const std::vector<std::string>& items, std::vector<double>& values) const {
    if (values.empty()) throw InvalidInput("cannot normalize an empty rating vector");
    for (double v : values) {
      if (!(std::isfinite(v) && v > 0.0)) {
        throw InvalidInput("ratings must be positive and finite to normalize");
      }
    }
    double scale = 1.0;
    std::size_t ref = values.size() - 1;
    switch (kind_) {
      case Kind::reference:
        if (!label_.empty()) {
          auto it = std::find(items.begin(), items.end(), label_);
          if (it == items.end()) {
            throw InvalidInput("normalization reference '" + label_ + "' is not an item");
          }
          ref = static_cast<std::size_t>(it - items.begin());
        }
        scale = values[ref];
        break;
      case Kind::sum_to_one:
        scale = std::accumulate(values.begin(), values.end(), 0.0);
        break;
      case Kind::geometric_mean_one: {
        double log_sum = 0.0;
        for (double v : values) log_sum += std::log(v);
        scale = std::exp(log_sum / static_cast<double>(values.size()));
        break;
      }
    }
    for (double& v : values) v /= scale;
    if (kind_ == Kind::reference) values[ref] = 1.0;
  }

 private:
  Kind kind_ = Kind::reference;
  std::string label_;
};

/// Positive strengths pi_i in input label order, with the scale convention
/// they satisfy.
struct RatingVector {
  std::vector<std::string> items;
  std::vector<double> values;
  Normalization normalization;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Normalizes raw positive strengths into a RatingVector.
inline RatingVector make_ratings(std::vector<std::string> items, std::vector<double> values,
                                 const Normalization& normalization) {
  if (items.size() != values.size()) {
    throw InvalidInput("rating vector length does not match item count");
  }
  Normalization resolved = normalization.resolved(items);
  resolved.apply(items, values);
  return RatingVector{std::move(items), std::move(values), std::move(resolved)};
}

/// Competition-style rank labels ("1", "2=", ...) in input order. Values
/// within `tie_tolerance` of each other share a rank; shared ranks carry a
/// trailing '='.
inline std::vector<std::string> rank_labels(const std::vector<double>& values,
                                            double tie_tolerance) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  std::vector<std::size_t> rank(n, 0);
  std::vector<std::size_t> group_size(n, 1);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n &&
           std::abs(values[order[start]] - values[order[end]]) <= tie_tolerance) {
      ++end;
    }
    for (std::size_t k = start; k < end; ++k) {
      rank[order[k]] = start + 1;
      group_size[order[k]] = end - start;
    }
    start = end;
  }

  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = std::to_string(rank[i]) + (group_size[i] > 1 ? "=" : "");
  }
  return labels;
}

}  // namespace btrate

#endif  // BTRATE_RATING_HPP_
