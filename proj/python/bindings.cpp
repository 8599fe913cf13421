#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "meetwalk/chain_analysis.hpp"
#include "meetwalk/digraph.hpp"
#include "meetwalk/error.hpp"
#include "meetwalk/mc_oracle.hpp"
#include "meetwalk/meeting_ctmc.hpp"
#include "meetwalk/meeting_dtmc.hpp"
#include "meetwalk/serialize.hpp"

namespace py = pybind11;
using namespace meetwalk;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Digraph digraph_from_weights(const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols()) throw ValidationError("weight matrix must be square");
  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      if (w(i, j) > 0.0) edges.push_back({static_cast<int>(i), static_cast<int>(j), w(i, j)});
    }
  }
  return Digraph(static_cast<int>(w.rows()), std::move(edges));
}

Eigen::MatrixXd weights_of(const Digraph& g) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(g.node_count(), g.node_count());
  for (const Edge& e : g.edges()) w(e.source, e.target) = e.weight;
  return w;
}

template <class Chain>
std::vector<Chain> chains(const std::vector<Eigen::MatrixXd>& ms) {
  std::vector<Chain> out;
  out.reserve(ms.size());
  for (const auto& m : ms) out.emplace_back(m);
  return out;
}

// Values as an (n,)*K array, +inf where the meeting time is infinite.
py::array_t<double> values_array(const MeetingTimeResult& r) {
  const ProductIndex& idx = r.index();
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(idx.agents()), idx.node_count());
  py::array_t<double> out(shape);
  double* data = out.mutable_data();
  for (std::size_t s = 0; s < r.state_count(); ++s) data[s] = r.value(s).value_or(std::numeric_limits<double>::infinity());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Expected meeting times of random walkers on directed graphs";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def(
      "generate",
      [](const std::string& family, int n, std::optional<int> clique, std::optional<int> tail,
         std::optional<int> rows, std::optional<int> cols, double radius, std::uint64_t seed) {
        GeneratorParams p;
        p.n = n;
        p.clique = clique;
        p.tail = tail;
        p.rows = rows;
        p.cols = cols;
        p.radius = radius;
        p.seed = seed;
        return weights_of(generate(parse_family(family), p));
      },
      py::arg("family"), py::arg("n"), py::kw_only(), py::arg("clique") = py::none(), py::arg("tail") = py::none(),
      py::arg("rows") = py::none(), py::arg("cols") = py::none(), py::arg("radius") = 0.0, py::arg("seed") = 0,
      "Weighted adjacency matrix of a generated graph.");

  m.def(
      "equal_neighbor_matrix",
      [](const Eigen::MatrixXd& w, bool self_loops) {
        return equal_neighbor_matrix(digraph_from_weights(w), self_loops).to_dense();
      },
      py::arg("weights"), py::arg("self_loops") = false);

  m.def(
      "rate_matrix", [](const Eigen::MatrixXd& w) { return rate_matrix_from_digraph(digraph_from_weights(w)).to_dense(); },
      py::arg("weights"), "Generator whose off-diagonal rates are the edge weights.");

  m.def(
      "decompose", [](const Eigen::MatrixXd& p) { return to_python(to_json(decompose(TransitionMatrix(p)))); },
      py::arg("matrix"));

  m.def(
      "stationary_distribution", [](const Eigen::MatrixXd& p) { return stationary_distribution(TransitionMatrix(p)); },
      py::arg("matrix"));

  m.def(
      "classify",
      [](const std::vector<Eigen::MatrixXd>& ps, const std::vector<Eigen::MatrixXd>& es, std::size_t budget) {
        return to_python(to_json(classify_tuple(chains<TransitionMatrix>(ps), chains<TransitionMatrix>(es), budget)));
      },
      py::arg("pursuers"), py::arg("evaders"), py::arg("state_budget") = kDefaultStateBudget);

  py::class_<MeetingTimeResult>(m, "MeetingTimes")
      .def_property_readonly("values", &values_array)
      .def_property_readonly("max",
                             [](const MeetingTimeResult& r) {
                               return r.max().value_or(std::numeric_limits<double>::infinity());
                             })
      .def_property_readonly("all_finite", &MeetingTimeResult::all_finite)
      .def_property_readonly("residual", &MeetingTimeResult::residual)
      .def_property_readonly("method", &MeetingTimeResult::method)
      .def_property_readonly("iterations", &MeetingTimeResult::iterations)
      .def_property_readonly("continuous",
                             [](const MeetingTimeResult& r) { return r.time_model() == TimeModel::continuous; })
      .def("to_dict", [](const MeetingTimeResult& r) { return to_python(to_json(r, std::nullopt)); });

  m.def(
      "meeting_times",
      [](const std::vector<Eigen::MatrixXd>& ps, const std::vector<Eigen::MatrixXd>& es, bool ctmc,
         std::size_t budget, std::size_t dense_limit) {
        SolverOptions o;
        o.state_budget = budget;
        o.dense_limit = dense_limit;
        if (ctmc) {
          const auto qp = chains<RateMatrix>(ps);
          const auto qe = chains<RateMatrix>(es);
          py::gil_scoped_release release;
          return ctmc_group_meeting_times(qp, qe, o);
        }
        const auto pp = chains<TransitionMatrix>(ps);
        const auto pe = chains<TransitionMatrix>(es);
        py::gil_scoped_release release;
        return group_meeting_times(pp, pe, o);
      },
      py::arg("pursuers"), py::arg("evaders"), py::kw_only(), py::arg("ctmc") = false,
      py::arg("state_budget") = kDefaultStateBudget, py::arg("dense_limit") = SolverOptions{}.dense_limit);

  m.def(
      "mean_meeting_time",
      [](const std::vector<Eigen::MatrixXd>& ps, const std::vector<Eigen::MatrixXd>& es) {
        const auto pp = chains<TransitionMatrix>(ps);
        const auto pe = chains<TransitionMatrix>(es);
        py::gil_scoped_release release;
        return mean_group_meeting_time(pp, pe);
      },
      py::arg("pursuers"), py::arg("evaders"));

  m.def(
      "hitting_times",
      [](const Eigen::MatrixXd& p) {
        const TransitionMatrix t(p);
        py::gil_scoped_release release;
        return hitting_times(t);
      },
      py::arg("matrix"), "H[i, j]: expected steps for a walker started at j to reach i.");

  m.def(
      "ctmc_hitting_times",
      [](const Eigen::MatrixXd& q, const std::vector<int>& targets) {
        const auto h = ctmc_hitting_times(RateMatrix(q), targets);
        Eigen::VectorXd out(static_cast<Eigen::Index>(h.size()));
        for (std::size_t i = 0; i < h.size(); ++i) {
          out(static_cast<Eigen::Index>(i)) = h[i].value_or(std::numeric_limits<double>::infinity());
        }
        return out;
      },
      py::arg("rates"), py::arg("targets"));

  m.def(
      "simulate",
      [](const std::vector<Eigen::MatrixXd>& ps, const std::vector<Eigen::MatrixXd>& es, const std::vector<int>& start,
         bool ctmc, std::uint64_t trials, std::optional<double> horizon, std::uint64_t seed, unsigned threads) {
        SimulationOptions o;
        o.trials = trials;
        o.horizon = horizon;
        o.seed = seed;
        o.threads = threads;
        SimulationEstimate est;
        if (ctmc) {
          const auto qp = chains<RateMatrix>(ps);
          const auto qe = chains<RateMatrix>(es);
          py::gil_scoped_release release;
          est = simulate_ctmc(qp, qe, start, o);
        } else {
          const auto pp = chains<TransitionMatrix>(ps);
          const auto pe = chains<TransitionMatrix>(es);
          py::gil_scoped_release release;
          est = simulate_dtmc(pp, pe, start, o);
        }
        return to_python(to_json(est));
      },
      py::arg("pursuers"), py::arg("evaders"), py::arg("start"), py::kw_only(), py::arg("ctmc") = false,
      py::arg("trials") = 100000, py::arg("horizon") = py::none(), py::arg("seed") = 1, py::arg("threads") = 0);
}
