#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "joulewire/constants.hpp"
#include "joulewire/entropy.hpp"
#include "joulewire/experiments.hpp"
#include "joulewire/negf.hpp"
#include "joulewire/probes.hpp"

namespace py = pybind11;
using namespace joulewire;

PYBIND11_MODULE(_joulewire, m) {
  m.doc() = "Biased tight-binding wire with floating thermoelectric probes: "
            "NEGF transport and entropy accounting";

  m.attr("K_BOLTZMANN") = k_boltzmann;

  py::class_<WireModel>(m, "WireModel")
      .def(py::init(&WireModel::uniform), py::arg("n_sites"),
           py::arg("hopping"), py::arg("gamma_p"), py::arg("onsite") = 0.0,
           py::arg("band_center") = 0.0)
      .def_readwrite("n_sites", &WireModel::n_sites)
      .def_readwrite("hopping", &WireModel::hopping)
      .def_readwrite("band_center", &WireModel::band_center)
      .def_readwrite("onsite", &WireModel::onsite)
      .def_readwrite("probe_coupling", &WireModel::probe_coupling)
      .def("validate", &WireModel::validate)
      .def("__repr__", [](const WireModel& w) {
        return "WireModel(n_sites=" + std::to_string(w.n_sites) +
               ", hopping=" + std::to_string(w.hopping) + ")";
      });

  py::enum_<TerminalKind>(m, "TerminalKind")
      .value("Source", TerminalKind::Source)
      .value("Drain", TerminalKind::Drain)
      .value("Probe", TerminalKind::Probe);

  py::class_<Terminal>(m, "Terminal")
      .def_readwrite("id", &Terminal::id)
      .def_readwrite("kind", &Terminal::kind)
      .def_readwrite("site", &Terminal::site)
      .def_readwrite("mu", &Terminal::mu)
      .def_readwrite("temperature", &Terminal::temperature);

  m.def("make_terminals", &make_terminals, py::arg("model"),
        py::arg("mu_source"), py::arg("mu_drain"), py::arg("lead_temperature"));

  m.def("surface_green", &surface_green, py::arg("energy"), py::arg("hopping"),
        py::arg("band_center") = 0.0);
  m.def("lead_broadening", &lead_broadening, py::arg("energy"),
        py::arg("hopping"), py::arg("band_center") = 0.0);

  py::class_<GreensBundle>(m, "GreensBundle")
      .def_readonly("energy", &GreensBundle::energy)
      .def_readonly("g_retarded", &GreensBundle::g_retarded)
      .def_readonly("g_advanced", &GreensBundle::g_advanced)
      .def_readonly("g_lesser", &GreensBundle::g_lesser)
      .def_readonly("spectral", &GreensBundle::spectral);

  m.def("greens_at", &greens_at, py::arg("model"), py::arg("terminals"),
        py::arg("energy"));

  py::class_<TransmissionMatrix>(m, "TransmissionMatrix")
      .def_readonly("energy", &TransmissionMatrix::energy)
      .def_readonly("t", &TransmissionMatrix::t)
      .def_readonly("gamma", &TransmissionMatrix::gamma)
      .def_readonly("site", &TransmissionMatrix::site);

  m.def("transmission_at", &transmission_at, py::arg("model"),
        py::arg("energy"));
  m.def("local_distribution", &local_distribution, py::arg("bundle"),
        py::arg("site"));

  py::class_<FermiState>(m, "FermiState")
      .def(py::init<double, double>(), py::arg("mu"), py::arg("temperature"))
      .def_readwrite("mu", &FermiState::mu)
      .def_readwrite("temperature", &FermiState::temperature);
  m.def("fermi_occupation", &fermi_occupation, py::arg("state"),
        py::arg("energy"));
  m.def("fermi_entropy_density", &fermi_entropy_density, py::arg("state"),
        py::arg("energy"));

  py::class_<FloatingProblem>(m, "FloatingProblem")
      .def_readonly("tm", &FloatingProblem::tm)
      .def_readonly("mu1", &FloatingProblem::mu1)
      .def_readonly("mu2", &FloatingProblem::mu2)
      .def_readonly("temp1", &FloatingProblem::temp1)
      .def_readonly("temp2", &FloatingProblem::temp2)
      .def_property_readonly("mu0", &FloatingProblem::mu0);

  m.def("make_floating_problem", &make_floating_problem, py::arg("model"),
        py::arg("mu1"), py::arg("mu2"), py::arg("lead_temperature"));

  py::enum_<ProbeMethod>(m, "ProbeMethod")
      .value("SommerfeldLinear", ProbeMethod::SommerfeldLinear)
      .value("ExactNonlinear", ProbeMethod::ExactNonlinear);

  py::class_<ProbeSolution>(m, "ProbeSolution")
      .def_readonly("mus", &ProbeSolution::mus)
      .def_readonly("temps", &ProbeSolution::temps)
      .def_readonly("residual_particle", &ProbeSolution::residual_particle)
      .def_readonly("residual_heat", &ProbeSolution::residual_heat)
      .def_readonly("method", &ProbeSolution::method);

  m.def("solve_potentials", &solve_potentials, py::arg("problem"));
  m.def("solve_temperatures", &solve_temperatures, py::arg("problem"),
        py::arg("mus"));
  m.def("solve_floating_sommerfeld", &solve_floating_sommerfeld,
        py::arg("problem"));
  m.def(
      "solve_floating_exact",
      [](const WireModel& model, double mu1, double mu2, double temp0,
         double residual_tol, double quadrature_tol) {
        ExactSolveSettings settings;
        settings.residual_tol = residual_tol;
        settings.quadrature.abs_tol = quadrature_tol;
        return solve_floating_exact(model, mu1, mu2, temp0, settings);
      },
      py::arg("model"), py::arg("mu1"), py::arg("mu2"),
      py::arg("lead_temperature"), py::arg("residual_tol") = 1e-10,
      py::arg("quadrature_tol") = 1e-12);
  m.def("apply_probe_solution", &apply_probe_solution, py::arg("terminals"),
        py::arg("solution"));

  py::class_<TerminalCurrents>(m, "TerminalCurrents")
      .def_readonly("particle", &TerminalCurrents::particle)
      .def_readonly("heat", &TerminalCurrents::heat)
      .def_readonly("energy", &TerminalCurrents::energy)
      .def_readonly("entropy", &TerminalCurrents::entropy);

  py::class_<EntropyReport>(m, "EntropyReport")
      .def_readonly("per_terminal", &EntropyReport::per_terminal)
      .def_readonly("probe_total_entropy", &EntropyReport::probe_total_entropy)
      .def_readonly("power", &EntropyReport::power)
      .def_readonly("ratio", &EntropyReport::ratio)
      .def_readonly("ratio_defined", &EntropyReport::ratio_defined)
      .def_readonly("sum_particle", &EntropyReport::sum_particle)
      .def_readonly("sum_energy", &EntropyReport::sum_energy)
      .def_readonly("sum_entropy", &EntropyReport::sum_entropy)
      .def_readonly("joule_identity", &EntropyReport::joule_identity)
      .def("conservation_max_abs", &EntropyReport::conservation_max_abs);

  m.def("joule_report", &joule_report, py::arg("problem"), py::arg("solution"));
  m.def(
      "joule_report_exact",
      [](const WireModel& model, const std::vector<Terminal>& terminals,
         double quadrature_tol) {
        return joule_report_exact(model, terminals, {quadrature_tol, 4000});
      },
      py::arg("model"), py::arg("terminals"),
      py::arg("quadrature_tol") = 1e-12);
  m.def("probe_entropy_injection", &probe_entropy_injection,
        py::arg("problem"), py::arg("solution"), py::arg("probe_index"));

  py::class_<SingleProbeAnalytic>(m, "SingleProbeAnalytic")
      .def_readonly("mu_probe", &SingleProbeAnalytic::mu_probe)
      .def_readonly("temp_probe", &SingleProbeAnalytic::temp_probe)
      .def_readonly("entropy_rate", &SingleProbeAnalytic::entropy_rate)
      .def_readonly("power", &SingleProbeAnalytic::power)
      .def_readonly("ratio", &SingleProbeAnalytic::ratio)
      .def_readonly("t_12", &SingleProbeAnalytic::t_12)
      .def_readonly("t_1p", &SingleProbeAnalytic::t_1p);

  m.def("single_probe_analytic", &single_probe_analytic, py::arg("hopping"),
        py::arg("gamma_p"), py::arg("mu1"), py::arg("mu2"),
        py::arg("lead_temperature"));

  py::class_<EnergyGrid>(m, "EnergyGrid")
      .def(py::init([](double lo, double hi, int points) {
             return EnergyGrid{lo, hi, points};
           }),
           py::arg("lo"), py::arg("hi"), py::arg("points") = 2001)
      .def_readonly("lo", &EnergyGrid::lo)
      .def_readonly("hi", &EnergyGrid::hi)
      .def_readonly("points", &EnergyGrid::points)
      .def("values", &EnergyGrid::values);

  m.def("default_distribution_grid", &default_distribution_grid,
        py::arg("model"), py::arg("terminals"), py::arg("points") = 2001);

  py::class_<DeficitResult>(m, "DeficitResult")
      .def_readonly("s_probe", &DeficitResult::s_probe)
      .def_readonly("s_local", &DeficitResult::s_local)
      .def_readonly("deficit", &DeficitResult::deficit);

  m.def("entropy_deficit", &entropy_deficit, py::arg("model"),
        py::arg("terminals"), py::arg("site"), py::arg("grid"));
  m.def("entropy_deficit_all", &entropy_deficit_all, py::arg("model"),
        py::arg("terminals"), py::arg("grid"));

  py::class_<SweepSpec>(m, "SweepSpec")
      .def(py::init<>())
      .def_readwrite("n_values", &SweepSpec::n_values)
      .def_readwrite("gamma_over_t", &SweepSpec::gamma_over_t)
      .def_readwrite("t", &SweepSpec::t)
      .def_readwrite("temp0", &SweepSpec::temp0)
      .def_readwrite("delta_mu", &SweepSpec::delta_mu)
      .def_readwrite("mu0", &SweepSpec::mu0)
      .def_readwrite("onsite", &SweepSpec::onsite)
      .def_readwrite("threads", &SweepSpec::threads);

  py::class_<RatioRow>(m, "RatioRow")
      .def_readonly("n", &RatioRow::n)
      .def_readonly("gamma_over_t", &RatioRow::gamma_over_t)
      .def_readonly("n_gamma_over_t", &RatioRow::n_gamma_over_t)
      .def_readonly("ratio", &RatioRow::ratio)
      .def_readonly("power", &RatioRow::power)
      .def_readonly("s_dot", &RatioRow::s_dot)
      .def_readonly("conservation_max_abs", &RatioRow::conservation_max_abs)
      .def_readonly("ok", &RatioRow::ok)
      .def_readonly("ratio_defined", &RatioRow::ratio_defined)
      .def_readonly("error", &RatioRow::error);

  m.def("sweep_ratio", &sweep_ratio, py::arg("spec"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<DeficitFit>(m, "DeficitFit")
      .def_readonly("gamma_over_t", &DeficitFit::gamma_over_t)
      .def_readonly("intercept", &DeficitFit::intercept)
      .def_readonly("slope", &DeficitFit::slope)
      .def_readonly("r_squared", &DeficitFit::r_squared)
      .def_readonly("points", &DeficitFit::points);

  m.def(
      "deficit_fit",
      [](const SweepSpec& spec, int min_n) { return deficit_fit(spec, min_n); },
      py::arg("spec"), py::arg("min_n") = 20,
      py::call_guard<py::gil_scoped_release>());

  py::class_<ProfileTable>(m, "ProfileTable")
      .def_readonly("site", &ProfileTable::site)
      .def_readonly("mu", &ProfileTable::mu)
      .def_readonly("temp", &ProfileTable::temp)
      .def_readonly("mu_monotone", &ProfileTable::mu_monotone)
      .def_readonly("interior_maxima", &ProfileTable::interior_maxima)
      .def_readonly("oscillation_flag", &ProfileTable::oscillation_flag);

  m.def("profiles", &profiles, py::arg("model"), py::arg("mu1"), py::arg("mu2"),
        py::arg("lead_temperature"));

  py::class_<DistributionCurve>(m, "DistributionCurve")
      .def_readonly("site", &DistributionCurve::site)
      .def_readonly("energy", &DistributionCurve::energy)
      .def_readonly("f_local", &DistributionCurve::f_local)
      .def_readonly("f_probe", &DistributionCurve::f_probe);

  m.def("distribution_snapshots", &distribution_snapshots, py::arg("model"),
        py::arg("terminals"), py::arg("sites"), py::arg("grid"));

  py::class_<ShareRow>(m, "ShareRow")
      .def_readonly("site", &ShareRow::site)
      .def_readonly("injection", &ShareRow::injection)
      .def_readonly("share", &ShareRow::share);

  py::class_<ShareTable>(m, "ShareTable")
      .def_readonly("rows", &ShareTable::rows)
      .def_readonly("total", &ShareTable::total)
      .def_readonly("defined", &ShareTable::defined);

  m.def("probe_entropy_shares", &probe_entropy_shares, py::arg("problem"),
        py::arg("solution"));

  py::enum_<CouplingRegime>(m, "CouplingRegime")
      .value("Weak", CouplingRegime::Weak)
      .value("Strong", CouplingRegime::Strong);

  py::class_<ResistanceFitResult>(m, "ResistanceFitResult")
      .def_readonly("regime", &ResistanceFitResult::regime)
      .def_readonly("intercept", &ResistanceFitResult::intercept)
      .def_readonly("coeff", &ResistanceFitResult::coeff)
      .def_readonly("r_squared", &ResistanceFitResult::r_squared)
      .def_readonly("points", &ResistanceFitResult::points);

  m.def("floating_chain_resistance", &floating_chain_resistance,
        py::arg("model"), py::arg("mu1"), py::arg("mu2"),
        py::arg("lead_temperature"));
  m.def(
      "resistance_scan",
      [](int n_sites, double t, double temp0, double delta_mu,
         const std::vector<double>& gammas, CouplingRegime regime) {
        return resistance_scan(n_sites, t, temp0, delta_mu, gammas, regime);
      },
      py::arg("n_sites"), py::arg("t"), py::arg("temp0"), py::arg("delta_mu"),
      py::arg("gammas_over_t"), py::arg("regime"),
      py::call_guard<py::gil_scoped_release>());
}
