#include "optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace progress::detail {
namespace {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < kDim; ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

}  // namespace

LocalResult minimize_bfgs(const Objective& f, const Gradient& grad, Vec x,
                          int max_iterations, double tol_objective,
                          double tol_param) {
  LocalResult res;
  double fx = f(x);
  if (!std::isfinite(fx)) {
    res.x = x;
    res.f = fx;
    return res;
  }
  Vec g = grad(x);

  // Inverse Hessian approximation, started at identity.
  std::array<std::array<double, kDim>, kDim> h{};
  for (std::size_t i = 0; i < kDim; ++i) h[i][i] = 1.0;

  for (int iter = 0; iter < max_iterations; ++iter) {
    res.iterations = iter + 1;

    Vec dir{};
    for (std::size_t i = 0; i < kDim; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < kDim; ++j) s += h[i][j] * g[j];
      dir[i] = -s;
    }
    double descent = dot(dir, g);
    if (descent >= 0.0) {  // numerical loss of descent direction: reset H
      for (std::size_t i = 0; i < kDim; ++i) {
        h[i].fill(0.0);
        h[i][i] = 1.0;
        dir[i] = -g[i];
      }
      descent = -dot(g, g);
      if (descent >= 0.0) break;  // zero gradient
    }

    // Armijo backtracking.
    double step = 1.0;
    double fnew = std::numeric_limits<double>::infinity();
    Vec xnew{};
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < kDim; ++i) xnew[i] = x[i] + step * dir[i];
      fnew = f(xnew);
      if (std::isfinite(fnew) && fnew <= fx + 1e-4 * step * descent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // line search failed; caller may fall back

    Vec gnew = grad(xnew);
    Vec s{};
    Vec y{};
    for (std::size_t i = 0; i < kDim; ++i) {
      s[i] = xnew[i] - x[i];
      y[i] = gnew[i] - g[i];
    }
    double sy = dot(s, y);

    double df = fx - fnew;
    double dx = norm(s);
    x = xnew;
    fx = fnew;
    g = gnew;

    double gnorm = norm(g);
    if (gnorm <= 1e-10 * (1.0 + std::fabs(fx)) ||
        (df <= tol_objective * (1.0 + std::fabs(fx)) &&
         dx <= tol_param * (1.0 + norm(x)))) {
      res.converged = true;
      break;
    }

    if (sy > 1e-12 * norm(s) * norm(y)) {
      // BFGS inverse update: H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      double rho = 1.0 / sy;
      Vec hy{};
      for (std::size_t i = 0; i < kDim; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < kDim; ++j) acc += h[i][j] * y[j];
        hy[i] = acc;
      }
      double yhy = dot(y, hy);
      for (std::size_t i = 0; i < kDim; ++i) {
        for (std::size_t j = 0; j < kDim; ++j) {
          h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) +
                     rho * rho * yhy * s[i] * s[j] + rho * s[i] * s[j];
        }
      }
    }
  }
  res.x = x;
  res.f = fx;
  return res;
}

LocalResult minimize_nelder_mead(const Objective& f, Vec x0,
                                 int max_iterations, double tol_objective,
                                 double tol_param) {
  constexpr std::size_t n = kDim;
  struct Vertex {
    Vec x;
    double f;
  };
  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back({x0, f(x0)});
  for (std::size_t i = 0; i < n; ++i) {
    Vec v = x0;
    v[i] += (std::fabs(v[i]) > 0.05) ? 0.05 * v[i] : 0.00025 + 0.05 * 0.1;
    simplex.push_back({v, f(v)});
  }
  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };
  order();

  LocalResult res;
  for (int iter = 0; iter < max_iterations; ++iter) {
    res.iterations = iter + 1;
    double spread = std::fabs(simplex.back().f - simplex.front().f);
    double size = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      size = std::max(size,
                      std::fabs(simplex.back().x[i] - simplex.front().x[i]));
    }
    if (spread <= tol_objective * (1.0 + std::fabs(simplex.front().f)) &&
        size <= tol_param * (1.0 + norm(simplex.front().x))) {
      res.converged = true;
      break;
    }

    Vec centroid{};
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i];
    }
    for (std::size_t i = 0; i < n; ++i) centroid[i] /= static_cast<double>(n);

    auto affine = [&](double t) {
      Vec p{};
      for (std::size_t i = 0; i < n; ++i) {
        p[i] = centroid[i] + t * (simplex.back().x[i] - centroid[i]);
      }
      return p;
    };

    Vec xr = affine(-1.0);
    double fr = f(xr);
    if (fr < simplex.front().f) {
      Vec xe = affine(-2.0);
      double fe = f(xe);
      simplex.back() = (fe < fr) ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[n - 1].f) {
      simplex.back() = {xr, fr};
    } else {
      Vec xc = affine(fr < simplex.back().f ? -0.5 : 0.5);
      double fc = f(xc);
      if (fc < std::min(fr, simplex.back().f)) {
        simplex.back() = {xc, fc};
      } else {
        for (std::size_t v = 1; v <= n; ++v) {  // shrink toward the best
          for (std::size_t i = 0; i < n; ++i) {
            simplex[v].x[i] =
                simplex[0].x[i] + 0.5 * (simplex[v].x[i] - simplex[0].x[i]);
          }
          simplex[v].f = f(simplex[v].x);
        }
      }
    }
    order();
  }
  res.x = simplex.front().x;
  res.f = simplex.front().f;
  return res;
}

}  // namespace progress::detail
