#include "ccn/verifier.hpp"

#include "ccn/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

namespace ccn {
namespace {

struct DetSample {
  double det = 0.0;
  double hadamard = 0.0;
};

class DetEvaluator {
 public:
  DetEvaluator(const MatrixFamily& family, Eigen::Index n) : family_(family), work_(n, n), lu_(n) {}

  DetSample operator()(double lambda) {
    family_(lambda, work_);
    DetSample s;
    s.hadamard = hadamard_bound(work_);
    if (work_.rows() == 0) {
      s.det = 1.0;
      s.hadamard = 1.0;
      return s;
    }
    lu_.compute(work_);
    s.det = lu_.determinant();
    return s;
  }

 private:
  const MatrixFamily& family_;
  Mat work_;
  Eigen::PartialPivLU<Mat> lu_;
};

double relative_sigma_min(const Mat& m) {
  const double nrm = spectral_norm(m);
  return nrm == 0.0 ? 0.0 : min_singular_value(m) / nrm;
}

// Real part of the eigenvalue of smallest modulus among the (numerically)
// real eigenvalues; NaN if there is none.
double smallest_real_eigenvalue(const Mat& m) {
  Eigen::EigenSolver<Mat> es(m, false);
  const CVec ev = es.eigenvalues();
  const double imag_tol = 1e-8 * std::max(1.0, spectral_norm(m));
  double best = std::numeric_limits<double>::quiet_NaN();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i).imag()) > imag_tol) continue;
    if (std::isnan(best) || std::abs(ev(i).real()) < std::abs(best)) best = ev(i).real();
  }
  return best;
}

// Real roots of det(L0 + lambda L1) as generalized eigenvalues of the pencil
// (L0, -L1). Bisection on det only resolves a root of multiplicity k to about
// eps^(1/k); the pencil eigenvalues of an equivariant family are semisimple
// and come out to rounding accuracy.
std::vector<double> pencil_roots(const Mat& l0, const Mat& l1) {
  std::vector<double> out;
  Eigen::GeneralizedEigenSolver<Mat> ges(l0, -l1, false);
  if (ges.info() != Eigen::Success) return out;
  const CVec alphas = ges.alphas();
  const Vec betas = ges.betas();
  const double scale = std::max(spectral_norm(l0), spectral_norm(l1));
  for (Eigen::Index i = 0; i < alphas.size(); ++i) {
    if (std::abs(betas(i)) <= 1e-12 * scale) continue;
    const std::complex<double> lam = alphas(i) / betas(i);
    if (std::abs(lam.imag()) <= 1e-6 * std::max(1.0, std::abs(lam))) out.push_back(lam.real());
  }
  return out;
}

// Secant iteration on the smallest real eigenvalue of L(lambda); fallback
// when no pencil root lies close to the bracketed point.
double secant_polish(const MatrixFamily& family, double lambda) {
  auto at = [&](double x) {
    Mat m;
    family(x, m);
    return m;
  };
  const double h = 1e-6 * std::max(1.0, std::abs(lambda));
  double x0 = lambda - h, x1 = lambda;
  double f0 = smallest_real_eigenvalue(at(x0));
  double f1 = smallest_real_eigenvalue(at(x1));
  for (int it = 0; it < 30; ++it) {
    if (std::isnan(f0) || std::isnan(f1) || f1 == f0) break;
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(x2)) break;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = smallest_real_eigenvalue(at(x1));
    if (std::abs(x1 - x0) <= 1e-15 * std::max(1.0, std::abs(x1))) break;
  }
  return x1;
}

double sigma_at(const MatrixFamily& family, double lambda) {
  Mat m;
  family(lambda, m);
  return relative_sigma_min(m);
}

double polish_root(const MatrixFamily& family, double lambda, double max_move, const std::vector<double>& roots) {
  double candidate = std::numeric_limits<double>::quiet_NaN();
  for (double r : roots)
    if (std::abs(r - lambda) <= max_move && (std::isnan(candidate) || std::abs(r - lambda) < std::abs(candidate - lambda)))
      candidate = r;
  if (std::isnan(candidate)) candidate = secant_polish(family, lambda);
  if (!std::isfinite(candidate) || std::abs(candidate - lambda) > max_move) return lambda;
  // keep whichever point is more singular
  return sigma_at(family, candidate) <= sigma_at(family, lambda) ? candidate : lambda;
}

double golden_min_sigma(const MatrixFamily& family, double a, double b, double* value) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double x) { return sigma_at(family, x); };
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  const double x = fc < fd ? c : d;
  *value = std::min(fc, fd);
  return x;
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

FamilySample sample_family(const EquiAlgebra& alg, Rng& rng) {
  FamilySample f;
  f.c0.resize(alg.dim());
  f.c1.resize(alg.dim());
  for (int p = 0; p < alg.dim(); ++p) f.c0(p) = rng.gaussian();
  for (int p = 0; p < alg.dim(); ++p) f.c1(p) = rng.gaussian();
  f.l0 = alg.element(f.c0);
  f.l1 = alg.element(f.c1);
  return f;
}

FamilySample sample_family(const EquiAlgebra& alg, std::uint64_t seed) {
  Rng rng(seed);
  FamilySample f = sample_family(alg, rng);
  f.seed = seed;
  return f;
}

std::vector<SingularPoint> find_singularities(const Mat& l0, const Mat& l1, const ScanConfig& cfg) {
  const MatrixFamily family = [&](double lambda, Mat& out) { out.noalias() = l0 + lambda * l1; };
  return find_singularities(family, static_cast<int>(l0.rows()), cfg, pencil_roots(l0, l1));
}

std::vector<SingularPoint> find_singularities(const MatrixFamily& family, int dim, const ScanConfig& cfg,
                                              const std::vector<double>& known_roots) {
  std::vector<SingularPoint> found;
  if (dim == 0 || cfg.grid < 2) return found;
  DetEvaluator det(family, dim);
  const int n = cfg.grid;
  const double a = cfg.lambda_min, b = cfg.lambda_max;
  const double h = (b - a) / (n - 1);
  std::vector<double> lam(static_cast<std::size_t>(n)), val(static_cast<std::size_t>(n)), had(static_cast<std::size_t>(n));
  double global = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = i == n - 1 ? b : a + i * h;
    const DetSample s = det(x);
    lam[static_cast<std::size_t>(i)] = x;
    val[static_cast<std::size_t>(i)] = s.det;
    had[static_cast<std::size_t>(i)] = s.hadamard;
    global = std::max(global, s.hadamard);
  }
  auto at = [](const std::vector<double>& v, int i) { return v[static_cast<std::size_t>(i)]; };

  // Grid points that are already singular to the threshold; near a root of
  // multiplicity k a whole run of points qualifies, keep its local minima.
  std::vector<double> roots, exact_hits;
  auto ratio = [&](int i) { return std::abs(at(val, i)) / at(had, i); };
  for (int i = 0; i < n; ++i) {
    if (!(ratio(i) <= cfg.det_threshold)) continue;
    if ((i > 0 && ratio(i - 1) < ratio(i)) || (i + 1 < n && ratio(i + 1) < ratio(i))) continue;
    exact_hits.push_back(at(lam, i));
  }

  for (int i = 0; i + 1 < n; ++i) {
    const int s0 = sign_of(at(val, i)), s1 = sign_of(at(val, i + 1));
    if (s0 == 0 || s1 == 0 || s0 == s1) continue;
    double lo = at(lam, i), hi = at(lam, i + 1);
    int slo = s0;
    for (int it = 0; it < cfg.bisection_iterations; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const int sm = sign_of(det(mid).det);
      if (sm == 0) {
        lo = hi = mid;
        break;
      }
      if (sm == slo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }

  const std::vector<double>& pencil = known_roots;
  const double max_move = std::max(1e-3, 25.0 * h);
  for (double r : roots) {
    SingularPoint p;
    p.lambda = polish_root(family, r, max_move, pencil);
    p.sigma_min = sigma_at(family, p.lambda);
    p.sign_change = true;
    found.push_back(p);
  }
  for (double r : exact_hits) {
    // A run of tiny |det| without a sign change nearby is a near miss
    // unless polishing lands on a genuinely singular point in the window.
    SingularPoint p;
    p.lambda = polish_root(family, r, max_move, pencil);
    p.sigma_min = sigma_at(family, p.lambda);
    p.sign_change = false;
    if (p.lambda < a || p.lambda > b || p.sigma_min > cfg.accept_sigma) continue;
    found.push_back(p);
  }

  // Even-multiplicity zeros do not change the sign of det.
  for (int i = 1; i + 1 < n; ++i) {
    const double v = std::abs(at(val, i));
    if (!(v < std::abs(at(val, i - 1)) && v <= std::abs(at(val, i + 1)))) continue;
    if (v > cfg.secondary_threshold * global) continue;
    if (sign_of(at(val, i - 1)) * sign_of(at(val, i)) < 0 || sign_of(at(val, i)) * sign_of(at(val, i + 1)) < 0) continue;
    double sigma = 1.0;
    const double x = golden_min_sigma(family, at(lam, i - 1), at(lam, i + 1), &sigma);
    if (sigma > cfg.accept_sigma) continue;
    found.push_back({x, sigma, false});
  }

  std::sort(found.begin(), found.end(), [](const SingularPoint& p, const SingularPoint& q) { return p.lambda < q.lambda; });
  std::vector<SingularPoint> out;
  for (const auto& p : found) {
    if (!out.empty() && std::abs(p.lambda - out.back().lambda) <= cfg.dedupe * std::max(1.0, std::abs(p.lambda))) {
      if (p.sigma_min < out.back().sigma_min) out.back() = p;
      continue;
    }
    out.push_back(p);
  }
  return out;
}

bool KernelReport::single_absolute(const Decomposition& dec) const {
  if (indeterminate || isotype.size() != 1) return false;
  const auto [cls, mult] = isotype.front();
  return cls >= 0 && mult == 1 && dec.classes[static_cast<std::size_t>(cls)].index == 1;
}

std::string KernelReport::isotype_string() const {
  if (indeterminate) return "indeterminate";
  if (isotype.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < isotype.size(); ++i) {
    if (i) os << "+";
    os << (isotype[i].first < 0 ? std::string("?") : class_label(isotype[i].first));
    if (isotype[i].second != 1) os << "^" << isotype[i].second;
  }
  return os.str();
}

KernelReport kernel_isotype(const Mat& l, const Decomposition& dec, Rng& rng, const Tolerances& tol) {
  KernelReport rep;
  FittingSplit fs;
  try {
    fs = fitting_split(dec.ambient, l, tol);
  } catch (const IllSeparatedSpectrum& e) {
    rep.indeterminate = true;
    rep.note = e.what();
    return rep;
  }
  rep.kernel_dim = static_cast<int>(fs.gker.cols());
  if (rep.kernel_dim == 0) return rep;
  rep.invariance = dec.ambient.invariance(fs.gker);
  if (rep.invariance > tol.invariance) {
    rep.indeterminate = true;
    rep.note = "kernel fails the invariance check";
    return rep;
  }

  const RepActions kr = dec.ambient.restrict_to(fs.gker);
  std::map<int, int> counts;
  try {
    for (const auto& leaf : generic_split(kr, rng, tol)) {
      const RepActions lr = kr.restrict_to(orthonormalize(leaf));
      int match = -1;
      for (int c = 0; c < static_cast<int>(dec.classes.size()) && match < 0; ++c) {
        const auto& cls = dec.classes[static_cast<std::size_t>(c)];
        if (cls.dim != lr.dim) continue;
        const auto& witness_rep = dec.components[static_cast<std::size_t>(cls.representative())].rep;
        if (are_isomorphic(witness_rep, lr, rng, tol).isomorphic) match = c;
      }
      ++counts[match];
    }
  } catch (const NumericalError& e) {
    rep.indeterminate = true;
    rep.note = e.what();
    return rep;
  }
  for (const auto& [c, m] : counts) rep.isotype.emplace_back(c, m);
  return rep;
}

double ExperimentReport::anomaly_fraction() const {
  const int classified = singular_points - indeterminate;
  return classified == 0 ? 0.0 : static_cast<double>(anomalies.size()) / classified;
}

double ExperimentReport::indeterminate_fraction() const {
  return singular_points == 0 ? 0.0 : static_cast<double>(indeterminate) / singular_points;
}

int analyzer_threads() {
  const char* env = std::getenv("ANALYZER_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return std::max(1, n);
}

ExperimentReport run_experiment(const Decomposition& dec, const EquiAlgebra& alg, const VerifierConfig& cfg) {
  ExperimentReport out;
  out.config = cfg;
  out.trials = std::max(0, cfg.trials);
  std::vector<TrialRecord> records(static_cast<std::size_t>(out.trials));

  auto run_trial = [&](int t) {
    TrialRecord& rec = records[static_cast<std::size_t>(t)];
    rec.trial = t;
    rec.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(t));
    Rng rng(rec.seed);
    rec.family = sample_family(alg, rng);
    rec.family.seed = rec.seed;
    for (const auto& p : find_singularities(rec.family.l0, rec.family.l1, cfg.scan)) {
      KernelReport k = kernel_isotype(rec.family.at(p.lambda), dec, rng, cfg.tol);
      k.lambda = p.lambda;
      k.sigma_min = p.sigma_min;
      if (!k.indeterminate && k.kernel_dim == 0) {
        k.indeterminate = true;
        k.note = "no eigenvalue in the zero cluster at the detected parameter";
      }
      rec.points.push_back(std::move(k));
    }
  };

  const int workers = std::min(cfg.threads > 0 ? cfg.threads : analyzer_threads(), std::max(1, out.trials));
  if (workers <= 1) {
    for (int t = 0; t < out.trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int t = w; t < out.trials; t += workers) run_trial(t);
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& rec : records) {
    for (const auto& k : rec.points) {
      ++out.singular_points;
      if (k.indeterminate) {
        ++out.indeterminate;
        continue;
      }
      ++out.histogram[k.isotype_string()];
      if (k.single_absolute(dec)) {
        ++out.single_absolute;
      } else {
        out.anomalies.emplace_back(rec.trial, k);
      }
    }
  }
  out.records = std::move(records);
  return out;
}

}  // namespace ccn
