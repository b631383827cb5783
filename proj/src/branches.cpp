#include "ccn/branches.hpp"

#include "ccn/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ccn {
namespace {

constexpr double kCrossingTol = 1e-6;

std::optional<Vec> newton(const NetworkField& field, Vec x, double lambda, const BranchConfig& cfg) {
  for (int it = 0; it <= cfg.newton_iterations; ++it) {
    const Vec f = field.eval(x, lambda);
    if (!f.allFinite()) return std::nullopt;
    if (f.norm() <= cfg.newton_tol) return x;
    if (it == cfg.newton_iterations) break;
    const Vec dx = field.jacobian(x, lambda).fullPivLu().solve(-f);
    if (!dx.allFinite()) return std::nullopt;
    x += dx;
    if (x.norm() > 1e6) return std::nullopt;
  }
  return std::nullopt;
}

// Moves a solution from (x, from) to `to`, halving the step on failure.
std::optional<Vec> step_to(const NetworkField& field, const Vec& x, const Vec& velocity, double from, double to,
                           const BranchConfig& cfg, int depth) {
  if (auto sol = newton(field, x + (to - from) * velocity, to, cfg)) return sol;
  if (depth >= cfg.max_halvings) return std::nullopt;
  const double mid = 0.5 * (from + to);
  auto half = step_to(field, x, velocity, from, mid, cfg, depth + 1);
  if (!half) return std::nullopt;
  const Vec v = (*half - x) / (mid - from);
  return step_to(field, *half, v, mid, to, cfg, depth + 1);
}

// Continues a solution known at lambda0 + side * delta to lambda0 + side * range
// on the grid lambda0 + side * j * delta. The branch passes through the
// origin at lambda0, which gives the first predictor.
std::vector<BranchPoint> continue_side(const NetworkField& field, double lambda0, int side, const Vec& first,
                                       const BranchConfig& cfg, std::vector<std::string>& warnings) {
  std::vector<BranchPoint> pts;
  const int steps = std::max(1, static_cast<int>(std::lround(cfg.range / cfg.delta)));
  Vec prev = Vec::Zero(first.size());
  Vec cur = first;
  double lam = lambda0 + side * cfg.delta;
  pts.push_back({lam, cur, field.eval(cur, lam).norm()});
  for (int j = 2; j <= steps; ++j) {
    const double next = lambda0 + side * j * cfg.delta;
    const Vec velocity = (cur - prev) / (side * cfg.delta);
    auto sol = step_to(field, cur, velocity, lam, next, cfg, 0);
    if (!sol) {
      warnings.push_back("continuation stopped at L = " + std::to_string(lam) + " (possible fold)");
      break;
    }
    prev = cur;
    cur = *sol;
    lam = next;
    pts.push_back({lam, cur, field.eval(cur, lam).norm()});
  }
  return pts;
}

const BranchPoint* point_at(const Branch& b, double lambda) {
  for (const auto& p : b.points)
    if (std::abs(p.lambda - lambda) <= 1e-12 * std::max(1.0, std::abs(lambda))) return &p;
  return nullptr;
}

bool same_branch(const Branch& a, const Branch& b, double lambda0, double tol) {
  std::vector<const BranchPoint*> common;
  std::vector<BranchPoint> sorted = a.points;
  std::sort(sorted.begin(), sorted.end(), [&](const BranchPoint& p, const BranchPoint& q) {
    return std::abs(p.lambda - lambda0) < std::abs(q.lambda - lambda0);
  });
  int matches = 0;
  for (const auto& p : sorted) {
    const BranchPoint* q = point_at(b, p.lambda);
    if (!q) continue;
    const double scale = std::max(p.x.norm(), q->x.norm());
    if ((p.x - q->x).norm() > tol * scale) return false;
    if (++matches == 3) return true;
  }
  return false;
}

Mat spectral_projector(const Mat& gker, const Mat& redim) {
  const auto n = gker.rows();
  Mat q(n, n);
  q << gker, redim;
  Mat d = Mat::Zero(n, n);
  d.topLeftCorner(gker.cols(), gker.cols()).setIdentity();
  return q * d * q.inverse();
}

}  // namespace

const char* crossing_name(Crossing c) { return c == Crossing::Transversal ? "transversal" : "tangential"; }

Bifurcation detect_bifurcation(const NetworkField& field, const Decomposition& dec, const BranchConfig& cfg, Rng& rng) {
  const int n = field.dim();
  const Vec zero = Vec::Zero(n);
  const MatrixFamily family = [&](double lambda, Mat& out) { out = field.jacobian(zero, lambda); };

  ScanConfig scan = cfg.scan;
  scan.lambda_min = cfg.lambda_min;
  scan.lambda_max = cfg.lambda_max;

  // Affine dependence on L in the linear part makes the pencil roots exact.
  bool affine = true;
  for (const auto& m : field.field().terms)
    if (m.y_degree() == 1 && m.l_exp > 1) affine = false;
  const std::vector<SingularPoint> points =
      affine ? find_singularities(field.jacobian(zero, 0.0), field.jacobian_lambda(zero, 0.0), scan)
             : find_singularities(family, n, scan);

  const double mid = 0.5 * (cfg.lambda_min + cfg.lambda_max);
  {
    // A linearization that is singular throughout has no isolated crossing.
    int singular = 0;
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      Mat m;
      family(cfg.lambda_min + t * (cfg.lambda_max - cfg.lambda_min), m);
      const double s = spectral_norm(m);
      if (s == 0.0 || min_singular_value(m) <= 1e-10 * s) ++singular;
    }
    if (singular == 5) throw NoBifurcation("the linearization at the trivial solution is singular for every L in the window");
  }
  if (points.empty())
    throw NoBifurcation("D_x F(0, L) is invertible on [" + std::to_string(cfg.lambda_min) + ", " +
                        std::to_string(cfg.lambda_max) + "]");

  const auto best = std::min_element(points.begin(), points.end(), [&](const SingularPoint& a, const SingularPoint& b) {
    return std::abs(a.lambda - mid) < std::abs(b.lambda - mid);
  });

  Bifurcation bif;
  bif.lambda0 = best->lambda;
  const Mat j = field.jacobian(zero, bif.lambda0);
  FittingSplit fs;
  try {
    fs = fitting_split(dec.ambient, j, cfg.tol);
  } catch (const IllSeparatedSpectrum& e) {
    throw NumericalError(std::string("kernel at the bifurcation point is ill-separated: ") + e.what());
  }
  if (fs.gker.cols() == 0) throw NumericalError("detected parameter has no zero eigenvalue cluster");
  bif.kernel = fs.gker;
  bif.projector = spectral_projector(fs.gker, fs.redim);
  bif.isotype = kernel_isotype(j, dec, rng, cfg.tol);
  bif.isotype.lambda = bif.lambda0;
  bif.isotype.sigma_min = best->sigma_min;
  bif.generic = bif.isotype.single_absolute(dec);

  const Mat jl = field.jacobian_lambda(zero, bif.lambda0);
  const Mat projected = bif.kernel.transpose() * bif.projector * jl * bif.kernel;
  bif.crossing_speed = min_singular_value(projected);
  // Even-multiplicity points are located by minimizing sigma_min, which pins
  // lambda0 only to about sqrt(eps); the threshold leaves room for that.
  bif.crossing = bif.crossing_speed > kCrossingTol * std::max(1.0, spectral_norm(jl)) ? Crossing::Transversal : Crossing::Tangential;
  return bif;
}

std::vector<SyncBlock> synchrony_pattern(const Branch& branch, double tol) {
  const int n = branch.points.empty() ? static_cast<int>(branch.slopes.size()) : static_cast<int>(branch.points.front().x.size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };
  auto equal_everywhere = [&](int i, int k) {
    for (const auto& p : branch.points)
      if (std::abs(p.x(i) - p.x(k)) > tol * p.x.norm()) return false;
    return true;
  };
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k)
      if (equal_everywhere(i, k)) parent[static_cast<std::size_t>(root(k))] = root(i);

  std::map<int, SyncBlock> blocks;
  for (int i = 0; i < n; ++i) blocks[root(i)].cells.push_back(i);
  std::vector<SyncBlock> out;
  for (auto& [r, b] : blocks) {
    b.zero = true;
    for (const auto& p : branch.points)
      if (std::abs(p.x(b.cells.front())) > tol * p.x.norm()) b.zero = false;
    double s = 0.0;
    if (branch.slopes.size() == n)
      for (int c : b.cells) s += branch.slopes(c);
    b.slope = b.zero ? 0.0 : s / static_cast<double>(b.cells.size());
    out.push_back(b);
  }
  std::sort(out.begin(), out.end(), [](const SyncBlock& a, const SyncBlock& b) { return a.cells.front() < b.cells.front(); });
  return out;
}

std::vector<Branch> trace_branches(const NetworkField& field, const Bifurcation& bif, const BranchConfig& cfg,
                                   const std::optional<Mat>& seed_basis) {
  const int n = field.dim();
  const Mat basis = seed_basis ? *seed_basis : bif.kernel;
  const auto k = static_cast<int>(basis.cols());
  const double l0 = bif.lambda0;
  const int steps = std::max(1, static_cast<int>(std::lround(cfg.range / cfg.delta)));

  // Cube mesh: all nonzero sign patterns in {-1, 0, 1}^k; axes and diagonals
  // beyond k = 4.
  std::vector<Vec> dirs;
  if (k <= 4) {
    int total = 1;
    for (int i = 0; i < k; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      Vec d(k);
      int c = code;
      for (int i = 0; i < k; ++i) {
        d(i) = static_cast<double>(c % 3 - 1);
        c /= 3;
      }
      if (d.isZero()) continue;
      dirs.push_back(d);
    }
  } else {
    for (int i = 0; i < k; ++i)
      for (double s : {-1.0, 1.0}) {
        Vec d = Vec::Zero(k);
        d(i) = s;
        dirs.push_back(d);
      }
    dirs.push_back(Vec::Ones(k));
    dirs.push_back(-Vec::Ones(k));
  }

  std::vector<Branch> found;
  Branch trivial;
  trivial.trivial = true;
  trivial.direction = Vec::Zero(n);
  trivial.slopes = Vec::Zero(n);
  for (int j = -steps; j <= steps; ++j)
    if (j != 0) trivial.points.push_back({l0 + j * cfg.delta, Vec::Zero(n), 0.0});
  found.push_back(trivial);

  int converged = 0;
  const double small = 1e-2 * std::min(cfg.epsilon, cfg.delta);
  const double large = 1e3 * std::max(cfg.epsilon, cfg.delta);
  for (int side : {1, -1}) {
    const double lam = l0 + side * cfg.delta;
    for (const auto& d : dirs) {
      Vec v = basis * d;
      v.normalize();
      auto sol = newton(field, cfg.epsilon * v, lam, cfg);
      if (!sol) continue;
      ++converged;
      if (sol->norm() <= small || sol->norm() >= large) continue;

      Branch br;
      br.direction = v;
      auto near = continue_side(field, l0, side, *sol, cfg, br.warnings);
      std::vector<BranchPoint> far;
      if (auto other = newton(field, -*sol, l0 - side * cfg.delta, cfg); other && other->norm() > small)
        far = continue_side(field, l0, -side, *other, cfg, br.warnings);
      else
        br.warnings.push_back("no solution on the other side of the bifurcation point");
      br.points = near;
      br.points.insert(br.points.end(), far.begin(), far.end());
      std::sort(br.points.begin(), br.points.end(), [](const BranchPoint& p, const BranchPoint& q) { return p.lambda < q.lambda; });

      bool dup = false;
      for (const auto& b : found)
        if (same_branch(b, br, l0, cfg.dedupe_tol) || same_branch(br, b, l0, cfg.dedupe_tol)) dup = true;
      if (dup) continue;

      const BranchPoint* plus = point_at(br, l0 + cfg.delta);
      const BranchPoint* minus = point_at(br, l0 - cfg.delta);
      if (plus && minus) {
        br.slopes = (plus->x - minus->x) / (2.0 * cfg.delta);
      } else if (plus) {
        br.slopes = plus->x / cfg.delta;
        br.warnings.push_back("one-sided slope estimate");
      } else {
        br.slopes = -minus->x / cfg.delta;
        br.warnings.push_back("one-sided slope estimate");
      }
      found.push_back(std::move(br));
    }
  }
  if (converged == 0) throw NumericalError("Newton diverged from every seed; try a smaller epsilon or delta");

  for (auto& b : found) b.synchrony = synchrony_pattern(b, cfg.sync_tol);

  // Deterministic order: trivial first, then by support size and support.
  auto support = [](const Branch& b) {
    std::vector<int> s;
    for (const auto& blk : b.synchrony)
      if (!blk.zero) s.insert(s.end(), blk.cells.begin(), blk.cells.end());
    std::sort(s.begin(), s.end());
    return s;
  };
  std::stable_sort(found.begin() + 1, found.end(), [&](const Branch& a, const Branch& b) {
    const auto sa = support(a), sb = support(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
    return a.slopes.sum() < b.slopes.sum();
  });
  return found;
}

ModelActions three_dim_model() {
  ModelActions m;
  m.a = Mat::Zero(3, 3);
  m.a(1, 0) = 1.0;
  m.a(2, 2) = 1.0;
  m.b = Mat::Zero(3, 3);
  m.b(0, 1) = 1.0;
  m.b(1, 2) = 1.0;
  m.b(2, 2) = 1.0;
  return m;
}

ReducedCoefficients estimate_reduced_coefficients(const NetworkField& field, const Bifurcation& bif,
                                                  const std::vector<Mat>& generators, Rng& rng) {
  const ModelActions model = three_dim_model();
  if (generators.size() != 2) throw ModelError("the 3-dimensional model needs exactly two generators");
  if (bif.kernel.cols() != 3) throw ModelError("kernel class mismatch: kernel has dimension " + std::to_string(bif.kernel.cols()));
  RepActions ambient{field.dim(), generators};
  const RepActions kr = ambient.restrict_to(bif.kernel);
  const RepActions mr{3, {model.a, model.b}};
  const HomSpace hom = hom_basis(mr, kr);
  if (hom.dim() != 1) throw ModelError("kernel class mismatch: Hom(model, kernel) has dimension " + std::to_string(hom.dim()));
  const Mat h = hom.basis.front();
  if (min_singular_value(h) <= 1e-8 * spectral_norm(h)) throw ModelError("kernel class mismatch: intertwiner is not invertible");

  ReducedCoefficients rc;
  rc.basis = bif.kernel * h;
  Eigen::Index r = 0, c = 0;
  rc.basis.cwiseAbs().maxCoeff(&r, &c);
  rc.basis /= rc.basis(r, c);

  const Mat& b = rc.basis;
  const Mat coord = (b.transpose() * b).ldlt().solve(b.transpose() * bif.projector);  // 3 x n
  const Vec zero = Vec::Zero(field.dim());
  const Mat jl = field.jacobian_lambda(zero, bif.lambda0);
  const Vec e1 = b.col(0), e3 = b.col(2);
  rc.alpha = (coord * jl * b)(0, 0);
  rc.beta = 0.5 * (coord * field.second_derivative(zero, bif.lambda0, e1, e1))(0);
  rc.gamma = (coord * field.second_derivative(zero, bif.lambda0, e1, e3))(0);

  const double small = kCrossingTol;
  if (std::abs(rc.alpha) <= small) rc.warnings.push_back("alpha = 0: the kernel eigenvalues do not cross transversally");
  if (std::abs(rc.beta) <= small) rc.warnings.push_back("beta = 0: degenerate quadratic part");
  if (std::abs(rc.beta + rc.gamma) <= small) rc.warnings.push_back("gamma = -beta: degenerate quadratic part on the third coordinate");

  // Truncated reduced map r(v, L) and its equivariance under (a, b).
  auto reduced = [&](const Vec& v, double lam) {
    const Vec x = b * v;
    return Vec(coord * (lam * (jl * x) + 0.5 * field.second_derivative(zero, bif.lambda0, x, x)));
  };
  for (int s = 0; s < 16; ++s) {
    Vec v(3);
    for (int i = 0; i < 3; ++i) v(i) = rng.gaussian();
    const double lam = rng.gaussian();
    const Vec rv = reduced(v, lam);
    const double scale = std::max(1.0, rv.norm());
    rc.hidden_residual = std::max(rc.hidden_residual, (reduced(model.a * v, lam) - model.a * rv).norm() / scale);
    rc.hidden_residual = std::max(rc.hidden_residual, (reduced(model.b * v, lam) - model.b * rv).norm() / scale);
  }
  return rc;
}

}  // namespace ccn
