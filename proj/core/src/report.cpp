#include <cmath>
#include <sstream>

#include <json.hpp>

#include "swgain/report.hpp"

namespace swgain {

namespace {

using nlohmann::json;

json Number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json WordJson(const Word& w) {
  json letters = json::array();
  for (const Letter& l : w.letters()) letters.push_back({l.mode, l.duration});
  return {{"letters", letters}};
}

json SignalJson(const Signal& sig) {
  json segs = json::array();
  for (const Segment& s : sig.segments()) segs.push_back({s.mode, s.duration});
  return {{"segments", segs}};
}

json RhoJson(const RhoEstimate& est) {
  return {{"tau", est.tau},
          {"lower", Number(est.lower)},
          {"upper", Number(est.upper)},
          {"witness", WordJson(est.witness)},
          {"inflation", Number(est.inflation)},
          {"mu_hat", Number(est.mu_hat)},
          {"epsilon", est.epsilon},
          {"polytope_size", est.polytope_size},
          {"stabilized", est.stabilized},
          {"flags", est.flags}};
}

json UoJson(const UniformObservabilityReport& uo) {
  return {{"per_mode_observable", uo.per_mode_observable},
          {"per_mode_rank", uo.per_mode_rank},
          {"gamma_floor", Number(uo.gramian_floor)},
          {"samples", uo.samples},
          {"verdict", to_string(uo.verdict)},
          {"rationale", uo.rationale}};
}

}  // namespace

std::string reduction_report_json(const SystemSpec& sys,
                                  const MinimalRealization& mr,
                                  const UniformObservabilityReport& uo) {
  json j = {{"n", sys.n()},
            {"r", mr.maps.controllable_dim},
            {"n_min", mr.sys_min.n()},
            {"per_mode_observable", uo.per_mode_observable},
            {"gamma_floor", Number(uo.gramian_floor)},
            {"verdict", to_string(uo.verdict)},
            {"label", mr.original_label}};
  return j.dump(2);
}

std::string rho_estimate_json(const RhoEstimate& est) { return RhoJson(est).dump(2); }

std::string rho_curve_json(const std::vector<RhoCurvePoint>& curve) {
  json arr = json::array();
  for (const RhoCurvePoint& p : curve) {
    json j = RhoJson(p.estimate);
    j["raw_lower"] = Number(p.raw_lower);
    j["envelope_lower"] = Number(p.envelope_lower);
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

std::string gain_report_json(const GainEstimate& est, double tau) {
  json j = {{"tau", tau},
            {"T", est.horizon},
            {"value", Number(est.value)},
            {"infinite", est.infinite},
            {"witness_signal", est.witness_signal ? SignalJson(*est.witness_signal)
                                                  : json(nullptr)},
            {"method", to_string(est.method)},
            {"tolerance", Number(est.tolerance)},
            {"flags", est.flags}};
  if (est.witness_input_energy_ratio) {
    j["witness_input_energy_ratio"] = Number(*est.witness_input_energy_ratio);
  }
  return j.dump(2);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "tau,T,gain_lower\n";
  for (const SweepRow& r : rows) out << r.tau << ',' << r.T << ',' << r.gain_lower << '\n';
  return out.str();
}

std::string finiteness_json(const FinitenessVerdict& v) {
  json j = {{"verdict", to_string(v.verdict)},
            {"n_min", v.n_min},
            {"rho_min_realization", RhoJson(v.rho_min_realization)},
            {"uniform_obs", UoJson(v.uniform_obs)},
            {"rationale", v.rationale}};
  return j.dump(2);
}

std::string tau_min_json(const TauMinInterval& iv) {
  json j = {{"reject", iv.reject},
            {"accept", iv.accept},
            {"width", iv.width()},
            {"degenerate", iv.degenerate},
            {"at_reject", RhoJson(iv.at_reject)},
            {"at_accept", RhoJson(iv.at_accept)},
            {"flags", iv.flags}};
  return j.dump(2);
}

std::string verification_json(const LyapunovVerification& rep) {
  json j = {{"alpha", rep.alpha},
            {"samples", rep.samples},
            {"max_violation", rep.max_violation},
            {"planar_samples", rep.planar_samples},
            {"max_planar_derivative", rep.max_planar_derivative},
            {"max_gradient_norm", rep.max_gradient_norm},
            {"min_ring", rep.min_ring},
            {"max_ring", rep.max_ring},
            {"closure_error", rep.closure_error},
            {"side_conditions_hold", rep.side_conditions_hold}};
  return j.dump(2);
}

std::string alpha_star_json(double alpha, double return_ratio, double tol) {
  json j = {{"alpha_star", alpha}, {"return_ratio", return_ratio}, {"tol", tol}};
  return j.dump(2);
}

}  // namespace swgain
