#include "lidx/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "lidx/error.hpp"

namespace lidx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double logistic_sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Unnormalised logistic pieces shared by cdf/density/inverse.
struct LogisticFrame {
  double la, lb, mass;
  explicit LogisticFrame(const dist::TruncatedLogistic& p)
      : la(logistic_sigmoid((p.a - p.center) / p.scale)),
        lb(logistic_sigmoid((p.b - p.center) / p.scale)),
        mass(lb - la) {}
};

double logistic_density(const dist::TruncatedLogistic& p, double x) {
  const LogisticFrame fr(p);
  const double l = logistic_sigmoid((x - p.center) / p.scale);
  return l * (1.0 - l) / (p.scale * fr.mass);
}

double exp_mass(const dist::TruncatedExponential& p) {
  return -std::expm1(-p.rate * (p.b - p.a));
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace

bool DensityBounds::bounded_away() const noexcept {
  return lower > 0.0 && std::isfinite(upper);
}

CdfModel CdfModel::uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, "uniform: need finite a < b");
  return CdfModel(dist::Uniform{a, b}, {a, b});
}

CdfModel CdfModel::logistic(double center, double scale, double a, double b) {
  require(std::isfinite(center) && std::isfinite(a) && std::isfinite(b) && a < b,
          "logistic: need finite center and a < b");
  require(scale > 0.0 && std::isfinite(scale), "logistic: scale must be positive");
  CdfModel m(dist::TruncatedLogistic{center, scale, a, b}, {a, b});
  require(LogisticFrame(std::get<dist::TruncatedLogistic>(m.params_)).mass > 0.0,
          "logistic: truncation window carries no mass");
  return m;
}

CdfModel CdfModel::exponential(double rate, double a, double b) {
  require(rate > 0.0 && std::isfinite(rate), "exp: rate must be positive");
  require(std::isfinite(a) && std::isfinite(b) && a < b, "exp: need finite a < b");
  return CdfModel(dist::TruncatedExponential{rate, a, b}, {a, b});
}

CdfModel CdfModel::power_law(double p) {
  require(p > 0.0 && std::isfinite(p), "pow: exponent must be positive");
  return CdfModel(dist::PowerLaw{p}, {0.0, 1.0});
}

CdfModel CdfModel::staircase(std::size_t steps) {
  require(steps >= 1, "staircase: need at least one step");
  return CdfModel(dist::AdversarialStaircase{steps}, {0.0, 1.0});
}

CdfModel CdfModel::tabulated(std::vector<double> values) {
  require(values.size() >= 2, "tabulated: need at least two nodes");
  require(values.front() == 0.0 && values.back() == 1.0,
          "tabulated: values must run from 0 to 1");
  for (std::size_t k = 1; k < values.size(); ++k)
    require(values[k] > values[k - 1], "tabulated: values must be strictly increasing");
  return CdfModel(
      dist::Tabulated{std::make_shared<const std::vector<double>>(std::move(values))},
      {0.0, 1.0});
}

CdfModel CdfModel::empirical(std::vector<double> sorted_keys, Interval support) {
  require(!sorted_keys.empty(), "empirical: need at least one key");
  require(std::is_sorted(sorted_keys.begin(), sorted_keys.end()),
          "empirical: keys must be sorted");
  require(support.contains(sorted_keys.front()) && support.contains(sorted_keys.back()),
          "empirical: keys must lie in the support");
  return CdfModel(
      dist::Empirical{std::make_shared<const std::vector<double>>(std::move(sorted_keys)),
                      support},
      support);
}

double CdfModel::cdf(double x) const {
  if (std::isnan(x)) throw std::domain_error("cdf: NaN argument");
  if (const auto* e = std::get_if<dist::Empirical>(&params_)) {
    const auto& k = *e->keys;
    return static_cast<double>(std::upper_bound(k.begin(), k.end(), x) - k.begin()) /
           static_cast<double>(k.size());
  }
  if (x <= support_.lo) return 0.0;
  if (x >= support_.hi) return 1.0;
  return std::visit(
      Overloaded{
          [&](const dist::Uniform& p) { return (x - p.a) / (p.b - p.a); },
          [&](const dist::TruncatedLogistic& p) {
            const LogisticFrame fr(p);
            return std::clamp(
                (logistic_sigmoid((x - p.center) / p.scale) - fr.la) / fr.mass, 0.0, 1.0);
          },
          [&](const dist::TruncatedExponential& p) {
            return std::clamp(-std::expm1(-p.rate * (x - p.a)) / exp_mass(p), 0.0, 1.0);
          },
          [&](const dist::PowerLaw& p) { return std::pow(x, p.p); },
          [&](const dist::AdversarialStaircase& p) {
            const double m = static_cast<double>(p.steps);
            const double s = x * m;
            const double i = std::min(std::floor(s), m - 1.0);
            const double t = s - i;
            return (t * t + i) / m;
          },
          [&](const dist::Tabulated& p) {
            const auto& v = *p.values;
            const double cells = static_cast<double>(v.size() - 1);
            const double s = x * cells;
            const auto k = static_cast<std::size_t>(std::min(std::floor(s), cells - 1.0));
            const double t = s - static_cast<double>(k);
            return v[k] + t * (v[k + 1] - v[k]);
          },
          [&](const dist::Empirical&) { return 0.0; },
      },
      params_);
}

double CdfModel::cdf_left(double x) const {
  if (const auto* e = std::get_if<dist::Empirical>(&params_)) {
    if (std::isnan(x)) throw std::domain_error("cdf: NaN argument");
    const auto& k = *e->keys;
    return static_cast<double>(std::lower_bound(k.begin(), k.end(), x) - k.begin()) /
           static_cast<double>(k.size());
  }
  return cdf(x);
}

double CdfModel::inverse(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("inverse: u outside [0, 1]");
  if (!invertible()) throw UnsupportedError("inverse: step CDFs are not invertible");
  const double x = std::visit(
      Overloaded{
          [&](const dist::Uniform& p) { return p.a + u * (p.b - p.a); },
          [&](const dist::TruncatedLogistic& p) {
            const LogisticFrame fr(p);
            const double v = fr.la + u * fr.mass;
            if (v <= 0.0) return p.a;
            if (v >= 1.0) return p.b;
            return p.center + p.scale * std::log(v / (1.0 - v));
          },
          [&](const dist::TruncatedExponential& p) {
            return p.a - std::log1p(-u * exp_mass(p)) / p.rate;
          },
          [&](const dist::PowerLaw& p) { return std::pow(u, 1.0 / p.p); },
          [&](const dist::AdversarialStaircase& p) {
            // Each step is an affine image of x^2, so invert with a square root.
            const double m = static_cast<double>(p.steps);
            const double s = u * m;
            const double i = std::min(std::floor(s), m - 1.0);
            return (i + std::sqrt(std::max(0.0, s - i))) / m;
          },
          [&](const dist::Tabulated& p) {
            const auto& v = *p.values;
            const auto it = std::upper_bound(v.begin(), v.end(), u);
            const std::size_t k = std::min<std::size_t>(
                v.size() - 2, static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                                  0, (it - v.begin()) - 1)));
            const double t = (u - v[k]) / (v[k + 1] - v[k]);
            return (static_cast<double>(k) + t) / static_cast<double>(v.size() - 1);
          },
          [&](const dist::Empirical&) { return 0.0; },
      },
      params_);
  return std::clamp(x, support_.lo, support_.hi);
}

double CdfModel::density(double x) const {
  if (!(x >= support_.lo && x <= support_.hi))
    throw std::domain_error("density: x outside the support");
  return std::visit(
      Overloaded{
          [&](const dist::Uniform& p) { return 1.0 / (p.b - p.a); },
          [&](const dist::TruncatedLogistic& p) { return logistic_density(p, x); },
          [&](const dist::TruncatedExponential& p) {
            return p.rate * std::exp(-p.rate * (x - p.a)) / exp_mass(p);
          },
          [&](const dist::PowerLaw& p) {
            if (x == 0.0) return p.p < 1.0 ? kInf : (p.p == 1.0 ? 1.0 : 0.0);
            return p.p * std::pow(x, p.p - 1.0);
          },
          [&](const dist::AdversarialStaircase& p) {
            const double m = static_cast<double>(p.steps);
            const double s = x * m;
            const double i = std::min(std::floor(s), m - 1.0);
            return 2.0 * (s - i);
          },
          [&](const dist::Tabulated& p) {
            const auto& v = *p.values;
            const double cells = static_cast<double>(v.size() - 1);
            const auto k =
                static_cast<std::size_t>(std::min(std::floor(x * cells), cells - 1.0));
            return (v[k + 1] - v[k]) * cells;
          },
          [&](const dist::Empirical&) -> double {
            throw UnsupportedError("density: empirical CDF has no density");
          },
      },
      params_);
}

DensityBounds CdfModel::density_bounds() const {
  return std::visit(
      Overloaded{
          [&](const dist::Uniform& p) {
            return DensityBounds{1.0 / (p.b - p.a), 1.0 / (p.b - p.a)};
          },
          [&](const dist::TruncatedLogistic& p) {
            // Unimodal: the maximum sits at the mode (clamped into the
            // window), the minimum at one of the endpoints.
            const double mode = std::clamp(p.center, p.a, p.b);
            return DensityBounds{std::min(logistic_density(p, p.a), logistic_density(p, p.b)),
                                 logistic_density(p, mode)};
          },
          [&](const dist::TruncatedExponential& p) {
            const double z = exp_mass(p);
            return DensityBounds{p.rate * std::exp(-p.rate * (p.b - p.a)) / z, p.rate / z};
          },
          [&](const dist::PowerLaw& p) {
            if (p.p == 1.0) return DensityBounds{1.0, 1.0};
            if (p.p > 1.0) return DensityBounds{0.0, p.p};
            return DensityBounds{p.p, kInf};
          },
          [&](const dist::AdversarialStaircase&) { return DensityBounds{0.0, 2.0}; },
          [&](const dist::Tabulated& p) {
            const auto& v = *p.values;
            const double cells = static_cast<double>(v.size() - 1);
            DensityBounds b{kInf, 0.0};
            for (std::size_t k = 0; k + 1 < v.size(); ++k) {
              const double s = (v[k + 1] - v[k]) * cells;
              b.lower = std::min(b.lower, s);
              b.upper = std::max(b.upper, s);
            }
            return b;
          },
          [&](const dist::Empirical&) { return DensityBounds{0.0, kInf}; },
      },
      params_);
}

std::vector<double> CdfModel::kinks() const {
  std::vector<double> out;
  if (const auto* s = std::get_if<dist::AdversarialStaircase>(&params_)) {
    for (std::size_t i = 1; i < s->steps; ++i)
      out.push_back(static_cast<double>(i) / static_cast<double>(s->steps));
  } else if (const auto* t = std::get_if<dist::Tabulated>(&params_)) {
    const std::size_t cells = t->values->size() - 1;
    for (std::size_t k = 1; k < cells; ++k)
      out.push_back(static_cast<double>(k) / static_cast<double>(cells));
  } else if (const auto* e = std::get_if<dist::Empirical>(&params_)) {
    const auto& k = *e->keys;
    out.reserve(k.size());
    for (double x : k)
      if (out.empty() || out.back() != x) out.push_back(x);
  }
  return out;
}

bool CdfModel::invertible() const noexcept {
  return !std::holds_alternative<dist::Empirical>(params_);
}

bool CdfModel::has_density() const noexcept { return invertible(); }

std::string CdfModel::spec() const {
  return std::visit(
      Overloaded{
          [](const dist::Uniform& p) { return "uniform:" + fmt17(p.a) + "," + fmt17(p.b); },
          [](const dist::TruncatedLogistic& p) {
            return "logistic:" + fmt17(p.center) + "," + fmt17(p.scale) + "," + fmt17(p.a) +
                   "," + fmt17(p.b);
          },
          [](const dist::TruncatedExponential& p) {
            return "exp:" + fmt17(p.rate) + "," + fmt17(p.a) + "," + fmt17(p.b);
          },
          [](const dist::PowerLaw& p) { return "pow:" + fmt17(p.p); },
          [](const dist::AdversarialStaircase& p) {
            return "staircase:" + std::to_string(p.steps);
          },
          [](const dist::Tabulated& p) {
            return "tabulated:" + std::to_string(p.values->size() - 1);
          },
          [](const dist::Empirical& p) { return "empirical:" + std::to_string(p.keys->size()); },
      },
      params_);
}

namespace {

std::vector<double> parse_numbers(std::string_view body, std::string_view spec) {
  std::vector<double> out;
  while (true) {
    const auto comma = body.find(',');
    const std::string token(body.substr(0, comma));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (token.empty() || used != token.size())
      throw std::invalid_argument("bad number in distribution spec '" + std::string(spec) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

CdfModel parse_cdf_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("distribution spec needs 'kind:params': '" + std::string(text) +
                                "'");
  const std::string_view kind = text.substr(0, colon);
  const std::vector<double> v = parse_numbers(text.substr(colon + 1), text);
  auto arity = [&](std::size_t n) {
    if (v.size() != n)
      throw std::invalid_argument("distribution '" + std::string(kind) + "' takes " +
                                  std::to_string(n) + " parameters");
  };
  try {
    if (kind == "uniform") {
      arity(2);
      return CdfModel::uniform(v[0], v[1]);
    }
    if (kind == "logistic") {
      arity(4);
      return CdfModel::logistic(v[0], v[1], v[2], v[3]);
    }
    if (kind == "exp") {
      arity(3);
      return CdfModel::exponential(v[0], v[1], v[2]);
    }
    if (kind == "pow") {
      arity(1);
      return CdfModel::power_law(v[0]);
    }
    if (kind == "staircase") {
      arity(1);
      if (v[0] < 1.0 || v[0] != std::floor(v[0]))
        throw std::invalid_argument("staircase: M must be a positive integer");
      return CdfModel::staircase(static_cast<std::size_t>(v[0]));
    }
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(e.what());
  }
  throw std::invalid_argument("unknown distribution kind '" + std::string(kind) + "'");
}

}  // namespace lidx
