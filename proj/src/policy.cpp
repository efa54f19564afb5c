#include "faasim/policy.hpp"

#include <cmath>

namespace faasim {

const char* policy_kind_name(PolicyKind k) {
  switch (k) {
    case PolicyKind::kSync: return "sync";
    case PolicyKind::kAsyncWindow: return "async_window";
    case PolicyKind::kPredictiveLr: return "predictive_lr";
    case PolicyKind::kDualTrack: return "dual_track";
    case PolicyKind::kFastAsync: return "fast_async";
  }
  return "?";
}

namespace {

// Solves the symmetric PSD system A x = b by Gaussian elimination with
// diagonal pivoting. Near-zero pivots (collinear features) get coefficient 0,
// which still reproduces any consistent fit exactly.
std::vector<double> solve_psd(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a[i][i]));
  const double eps = max_diag * 1e-12 + 1e-300;

  std::vector<double> x(n, 0.0);
  std::vector<bool> done(n, false);
  std::vector<std::size_t> order;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t p = n;
    double best = eps;
    for (std::size_t j = 0; j < n; ++j) {
      if (!done[j] && a[j][j] > best) {
        best = a[j][j];
        p = j;
      }
    }
    if (p == n) break;  // remaining columns are (near-)dependent
    done[p] = true;
    order.push_back(p);
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || a[i][p] == 0.0) continue;
      double f = a[i][p] / a[p][p];
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= f * a[p][j];
      b[i] -= f * b[p];
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t p = *it;
    double acc = b[p];
    for (std::size_t j = 0; j < n; ++j) {
      if (j != p) acc -= a[p][j] * x[j];
    }
    x[p] = acc / a[p][p];
  }
  return x;
}

}  // namespace

bool LrModel::fit(const std::vector<double>& tick_means, int lags) {
  lags_ = lags;
  fitted_ = false;
  const int n = static_cast<int>(tick_means.size());
  if (n < lags + 2) return false;

  bool constant = true;
  for (int t = lags; t < n; ++t) {
    if (tick_means[t] != tick_means[lags]) {
      constant = false;
      break;
    }
  }
  if (constant) return false;

  // Normal equations over rows (y[t-1..t-lags], 1) -> y[t].
  const int d = lags + 1;
  std::vector<std::vector<double>> xtx(d, std::vector<double>(d, 0.0));
  std::vector<double> xty(d, 0.0);
  std::vector<double> row(d, 1.0);
  for (int t = lags; t < n; ++t) {
    for (int j = 0; j < lags; ++j) row[j] = tick_means[t - 1 - j];
    row[lags] = 1.0;
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) xtx[i][j] += row[i] * row[j];
      xty[i] += row[i] * tick_means[t];
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) xtx[i][j] = xtx[j][i];
  }

  std::vector<double> sol = solve_psd(std::move(xtx), std::move(xty));
  weights_.assign(sol.begin(), sol.begin() + lags);
  intercept_ = sol[lags];
  fitted_ = true;
  return true;
}

double LrModel::predict(const std::vector<double>& recent) const {
  double acc = intercept_;
  for (int j = 0; j < lags_ && j < static_cast<int>(recent.size()); ++j) {
    acc += weights_[j] * recent[j];
  }
  return acc;
}

}  // namespace faasim
