#include "tsalign/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace tsalign::reference {

namespace {
constexpr double kTau = 6.283185307179586476925286766559;
}

std::vector<double> window_mean(std::span<const double> series, std::size_t n) {
  const std::size_t length = series.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t w = 0; w < n; ++w) {
    const std::size_t begin = w * length / n;
    const std::size_t end = (w + 1) * length / n;
    double sum = 0.0;
    for (std::size_t t = begin; t < end; ++t) sum += series[t];
    out[w] = sum / static_cast<double>(end - begin);
  }
  return out;
}

std::vector<double> window_std(std::span<const double> series, std::size_t n) {
  const std::size_t length = series.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t w = 0; w < n; ++w) {
    const std::size_t begin = w * length / n;
    const std::size_t end = (w + 1) * length / n;
    const auto count = static_cast<double>(end - begin);
    double sum = 0.0;
    for (std::size_t t = begin; t < end; ++t) sum += series[t];
    const double mean = sum / count;
    double sq = 0.0;
    for (std::size_t t = begin; t < end; ++t) {
      const double d = series[t] - mean;
      sq += d * d;
    }
    out[w] = std::sqrt(sq / count);
  }
  return out;
}

std::vector<std::complex<double>> naive_dft(std::span<const double> series) {
  const std::size_t length = series.size();
  std::vector<std::complex<double>> spectrum(length);
  for (std::size_t k = 0; k < length; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t t = 0; t < length; ++t) {
      // k*t reduced mod L keeps the angle in [0, 2pi) exactly.
      const std::uint64_t phase_index =
          (static_cast<std::uint64_t>(k) * t) % length;
      const double angle =
          -kTau * static_cast<double>(phase_index) / static_cast<double>(length);
      re += series[t] * std::cos(angle);
      im += series[t] * std::sin(angle);
    }
    spectrum[k] = {re, im};
  }
  return spectrum;
}

std::vector<double> naive_fourier_top(std::span<const double> series, std::size_t n) {
  const auto spectrum = naive_dft(series);
  const std::size_t bins = series.size() / 2 + 1;
  std::vector<std::pair<double, std::size_t>> ranked(bins);
  for (std::size_t k = 0; k < bins; ++k) ranked[k] = {std::abs(spectrum[k]), k};
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < std::min(n, bins); ++i) out[i] = ranked[i].first;
  return out;
}

int brute_force_knn(std::span<const double> query,
                    const std::vector<std::vector<double>>& train,
                    std::span<const int> labels, std::size_t k) {
  struct Neighbor {
    double distance;
    std::size_t row;
  };
  std::vector<Neighbor> neighbors(train.size());
  for (std::size_t r = 0; r < train.size(); ++r) {
    double sq = 0.0;
    for (std::size_t j = 0; j < query.size(); ++j) {
      const double d = query[j] - train[r][j];
      sq += d * d;
    }
    neighbors[r] = {std::sqrt(sq), r};
  }
  std::sort(neighbors.begin(), neighbors.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.row < b.row;
  });

  const int num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::size_t> votes(static_cast<std::size_t>(num_classes), 0);
  std::vector<double> summed(static_cast<std::size_t>(num_classes), 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const auto cls = static_cast<std::size_t>(labels[neighbors[i].row]);
    ++votes[cls];
    summed[cls] += neighbors[i].distance;
  }

  int best = 0;
  for (int cls = 1; cls < num_classes; ++cls) {
    const auto c = static_cast<std::size_t>(cls);
    const auto b = static_cast<std::size_t>(best);
    if (votes[c] > votes[b] ||
        (votes[c] == votes[b] && votes[c] > 0 && summed[c] < summed[b])) {
      best = cls;
    }
  }
  return best;
}

EigenDecomposition symmetric_eigen(const std::vector<double>& matrix, std::size_t n) {
  std::vector<double> a = matrix;
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const auto at = [&](std::vector<double>& m, std::size_t r, std::size_t c) -> double& {
    return m[r * n + c];
  };

  for (int iter = 0; iter < 100 * static_cast<int>(n * n) + 100; ++iter) {
    // Largest off-diagonal element is the pivot.
    std::size_t p = 0, q = 1;
    double largest = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double magnitude = std::fabs(a[i * n + j]);
        if (magnitude > largest) {
          largest = magnitude;
          p = i;
          q = j;
        }
      }
    }
    if (n < 2 || largest < 1e-300) break;
    double off = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += a[i * n + i] * a[i * n + i];
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a[i * n + j] * a[i * n + j];
    }
    if (off <= 1e-30 * (diag + off)) break;

    const double app = at(a, p, p);
    const double aqq = at(a, q, q);
    const double apq = at(a, p, q);
    const double theta = 0.5 * std::atan2(2.0 * apq, aqq - app);
    const double c = std::cos(theta);
    const double s = std::sin(theta);

    for (std::size_t i = 0; i < n; ++i) {
      const double aip = at(a, i, p);
      const double aiq = at(a, i, q);
      at(a, i, p) = c * aip - s * aiq;
      at(a, i, q) = s * aip + c * aiq;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double api = at(a, p, i);
      const double aqi = at(a, q, i);
      at(a, p, i) = c * api - s * aqi;
      at(a, q, i) = s * api + c * aqi;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double vip = at(v, i, p);
      const double viq = at(v, i, q);
      at(v, i, p) = c * vip - s * viq;
      at(v, i, q) = s * vip + c * viq;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x * n + x] > a[y * n + y];
  });

  EigenDecomposition result;
  result.values.resize(n);
  result.vectors.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    result.values[i] = a[order[i] * n + order[i]];
    for (std::size_t r = 0; r < n; ++r) result.vectors[i][r] = v[r * n + order[i]];
  }
  return result;
}

}  // namespace tsalign::reference
