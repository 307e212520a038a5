#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace oracle {
namespace {

Mat Herm(const Mat& m) { return 0.5 * (m + m.adjoint()); }

double PowFn(double v, double t) { return std::pow(v, t); }

// Largest lambda with rho - lambda sigma singular, sigma > 0.
double MaxRatio(const Mat& rho, const Mat& sigma) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(Herm(rho), Herm(sigma));
  return es.eigenvalues().maxCoeff();
}

// Golden-section minimum of a convex function on [lo, hi].
template <class F>
double GoldenMin(F f, double lo, double hi, int iters, double* arg) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
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
  const double x = 0.5 * (a + b);
  if (arg) *arg = x;
  return f(x);
}

}  // namespace

Vec Eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(Herm(h));
  return es.eigenvalues();
}

Mat SpectralFunction(const Mat& h, double (*f)(double, double), double arg, double cut) {
  Eigen::SelfAdjointEigenSolver<Mat> es(Herm(h));
  const Vec& w = es.eigenvalues();
  const double top = w.maxCoeff();
  Mat out = Mat::Zero(h.rows(), h.cols());
  for (int k = 0; k < w.size(); ++k) {
    if (w[k] <= cut * top) continue;
    out += f(w[k], arg) * es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  }
  return out;
}

Mat Power(const Mat& h, double t) { return SpectralFunction(h, PowFn, t); }

double Entropy(const Mat& rho) {
  double h = 0.0;
  for (double v : Eigenvalues(rho)) {
    if (v > 1e-15) h -= v * std::log2(v);
  }
  return h;
}

double MaxRelativeEntropy(const Mat& rho, const Mat& sigma) {
  return std::log2(MaxRatio(rho, sigma));
}

double TwoStateBarycentric(const Mat& rho1, const Mat& rho2, double* weight) {
  auto mu = [&](double a) {
    const Mat s = a * rho1 + (1.0 - a) * rho2;
    return std::max(MaxRatio(rho1, s), MaxRatio(rho2, s));
  };
  double lo = 1e-6, hi = 1.0 - 1e-6, best_a = 0.5, best = mu(0.5);
  for (int round = 0; round < 12; ++round) {
    const int n = 200;
    for (int i = 0; i <= n; ++i) {
      const double a = lo + (hi - lo) * i / n;
      const double v = mu(a);
      if (v < best) {
        best = v;
        best_a = a;
      }
    }
    const double half = (hi - lo) / 20.0;
    lo = std::max(1e-9, best_a - half);
    hi = std::min(1.0 - 1e-9, best_a + half);
  }
  if (weight) *weight = best_a;
  return std::log2(best);
}

double QubitDominatingTrace(const std::vector<Mat>& states) {
  double a_floor = -std::numeric_limits<double>::infinity();
  for (const Mat& r : states) a_floor = std::max(a_floor, r(0, 0).real());
  // Best trace for a fixed off-diagonal entry z, minimised over a.
  auto best_for = [&](Complex z) {
    auto trace = [&](double a) {
      double b = -std::numeric_limits<double>::infinity();
      for (const Mat& r : states) {
        const double gap = a - r(0, 0).real();
        const double off = std::norm(z - r(0, 1));
        if (gap <= 0.0) return std::numeric_limits<double>::infinity();
        b = std::max(b, r(1, 1).real() + off / gap);
      }
      return a + b;
    };
    return GoldenMin(trace, a_floor, a_floor + 4.0, 120, nullptr);
  };
  double cx = 0.0, cy = 0.0, width = 2.0, best = std::numeric_limits<double>::infinity();
  for (int round = 0; round < 14; ++round) {
    const int n = 24;
    double bx = cx, by = cy;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double x = cx - width + 2.0 * width * i / n;
        const double y = cy - width + 2.0 * width * j / n;
        const double v = best_for(Complex(x, y));
        if (v < best) {
          best = v;
          bx = x;
          by = y;
        }
      }
    }
    cx = bx;
    cy = by;
    width *= 0.25;
  }
  return best;
}

double QubitProjectiveLeakage(const std::vector<Mat>& states, int points, Vec* best_direction) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / points;
    const double r = std::sqrt(1.0 - z * z);
    const double x = r * std::cos(golden * i), y = r * std::sin(golden * i);
    double sum = 0.0;
    for (int s : {1, -1}) {
      Mat p(2, 2);
      p << 1.0 + s * z, double(s) * Complex(x, -y), double(s) * Complex(x, y), 1.0 - s * z;
      p *= 0.5;
      double m = 0.0;
      for (const Mat& rho : states) m = std::max(m, (rho * p).trace().real());
      sum += m;
    }
    if (sum > best) {
      best = sum;
      if (best_direction) *best_direction = Vec::Map(std::vector<double>{x, y, z}.data(), 3);
    }
  }
  return std::log2(best);
}

double PovmFixedPoint(const std::vector<Mat>& states, std::vector<Mat> m, int iterations) {
  const int d = static_cast<int>(states.front().rows());
  for (int it = 0; it < iterations; ++it) {
    Mat r = Mat::Zero(d, d);
    for (std::size_t x = 0; x < states.size(); ++x) r += states[x] * m[x] * states[x];
    const Mat l_inv = Power(Herm(r), -0.5);
    for (std::size_t x = 0; x < states.size(); ++x) {
      m[x] = Herm(l_inv * states[x] * m[x] * states[x] * l_inv);
    }
  }
  double v = 0.0;
  for (std::size_t x = 0; x < states.size(); ++x) v += (states[x] * m[x]).trace().real();
  return std::log2(v);
}

double SibsonBinaryGrid(const std::vector<double>& prior,
                        const std::vector<std::vector<double>>& kernel, double alpha) {
  auto divergence = [&](double t) {
    const double q[2] = {t, 1.0 - t};
    double s = 0.0;
    for (std::size_t x = 0; x < prior.size(); ++x) {
      for (int y = 0; y < 2; ++y) {
        if (kernel[x][y] == 0.0) continue;
        s += prior[x] * std::pow(kernel[x][y], alpha) * std::pow(q[y], 1.0 - alpha);
      }
    }
    return std::log2(s) / (alpha - 1.0);
  };
  double lo = 1e-12, hi = 1.0 - 1e-12, best_t = 0.5, best = divergence(0.5);
  for (int round = 0; round < 10; ++round) {
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
      const double t = lo + (hi - lo) * i / n;
      const double v = divergence(t);
      if (v < best) {
        best = v;
        best_t = t;
      }
    }
    const double half = (hi - lo) / 40.0;
    lo = std::max(1e-12, best_t - half);
    hi = std::min(1.0 - 1e-12, best_t + half);
  }
  return best;
}

double MutualInformation(const std::vector<double>& prior,
                         const std::vector<std::vector<double>>& kernel) {
  const std::size_t outputs = kernel.front().size();
  double mi = 0.0;
  for (std::size_t y = 0; y < outputs; ++y) {
    double q = 0.0;
    for (std::size_t x = 0; x < prior.size(); ++x) q += prior[x] * kernel[x][y];
    for (std::size_t x = 0; x < prior.size(); ++x) {
      const double w = kernel[x][y];
      if (w > 0.0) mi += prior[x] * w * std::log2(w / q);
    }
  }
  return mi;
}

Mat DepolarizeAffine(const Mat& rho, double p) {
  const int d = static_cast<int>(rho.rows());
  return (p / d) * Mat::Identity(d, d) + (1.0 - p) * rho;
}

}  // namespace oracle
