#include "lidx/measure.hpp"

#include <cmath>
#include <stdexcept>

#include "lidx/error.hpp"

namespace lidx {

std::string MeasureSpec::str() const {
  switch (kind) {
    case Kind::Lebesgue: return "lebesgue";
    case Kind::Matched: return "matched";
    case Kind::Explicit: return model->spec();
  }
  return {};
}

MeasureSpec parse_measure_spec(std::string_view text) {
  if (text == "lebesgue" || text == "uniform") return MeasureSpec::lebesgue();
  if (text == "matched") return MeasureSpec::matched();
  return MeasureSpec::explicit_cdf(parse_cdf_spec(text));
}

Measure Measure::lebesgue(Interval domain) {
  if (!(domain.length() > 0)) throw std::domain_error("Measure: empty domain");
  const double h = 1.0 / domain.length();
  return {[h](double) { return h; }, domain, {}};
}

Measure Measure::of(const CdfModel& model) {
  if (!model.has_density())
    throw UnsupportedError("Measure: distribution '" + model.spec() + "' has no density");
  const Interval s = model.support();
  return {[model, s](double x) { return s.contains(x) ? model.density(x) : 0.0; }, s,
          model.kinks()};
}

Measure Measure::resolve(const MeasureSpec& spec, const CdfModel& data, Interval domain) {
  switch (spec.kind) {
    case MeasureSpec::Kind::Lebesgue: return lebesgue(domain);
    case MeasureSpec::Kind::Matched: {
      Measure m = of(data);
      m.domain = domain;
      return m;
    }
    case MeasureSpec::Kind::Explicit: {
      const CdfModel& g = *spec.model;
      const double mass = g.cdf(domain.hi) - g.cdf_left(domain.lo);
      if (std::abs(mass - 1.0) > 1e-9)
        throw std::domain_error("Measure: '" + g.spec() +
                                "' does not have unit mass on the domain");
      Measure m = of(g);
      m.domain = domain;
      auto ks = g.kinks();
      const Interval s = g.support();
      if (s.lo > domain.lo) ks.push_back(s.lo);
      if (s.hi < domain.hi) ks.push_back(s.hi);
      m.kinks = std::move(ks);
      return m;
    }
  }
  throw std::logic_error("Measure::resolve: bad kind");
}

CdfModel query_distribution(const MeasureSpec& spec, const CdfModel& data) {
  switch (spec.kind) {
    case MeasureSpec::Kind::Lebesgue: {
      const Interval s = data.support();
      return CdfModel::uniform(s.lo, s.hi);
    }
    case MeasureSpec::Kind::Matched: return data;
    case MeasureSpec::Kind::Explicit: return *spec.model;
  }
  throw std::logic_error("query_distribution: bad kind");
}

}  // namespace lidx
