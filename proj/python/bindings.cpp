#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ceei/discrete_solve.hpp"
#include "ceei/eg_solver.hpp"
#include "ceei/error.hpp"
#include "ceei/fairness.hpp"
#include "ceei/generators.hpp"
#include "ceei/instance_io.hpp"

namespace py = pybind11;
using namespace ceei;

namespace {

// Rationals cross the boundary as fractions.Fraction.
py::object fraction(const Rational& v) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(to_string(v));
}

Rational rational(const py::handle& v) {
  if (py::isinstance<py::bool_>(v)) throw py::type_error("utilities must be numbers, not bool");
  if (py::isinstance<py::int_>(v)) return parse_rational(py::str(v).cast<std::string>());
  if (py::isinstance<py::str>(v)) return parse_rational(v.cast<std::string>());
  if (py::hasattr(v, "numerator") && py::hasattr(v, "denominator") && !py::isinstance<py::float_>(v)) {
    return parse_rational(py::str(v.attr("numerator")).cast<std::string>() + "/" +
                          py::str(v.attr("denominator")).cast<std::string>());
  }
  if (py::isinstance<py::float_>(v)) return from_double(v.cast<double>());
  throw py::type_error("expected an int, Fraction, float or \"a/b\" string");
}

py::list fractions(std::span<const Rational> values) {
  py::list out;
  for (const auto& v : values) out.append(fraction(v));
  return out;
}

Instance make_instance(const py::sequence& rows) {
  std::vector<std::vector<Rational>> out;
  for (const auto& row : rows) {
    std::vector<Rational> r;
    for (const auto& v : row.cast<py::sequence>()) r.push_back(rational(v));
    out.push_back(std::move(r));
  }
  return Instance::from_rows(out);
}

DiscreteAssignment make_assignment(const Instance& inst, const std::vector<AgentIndex>& owner) {
  return DiscreteAssignment(inst.agents(), owner);
}

py::object certificate(const Certificate& cert) {
  return std::visit(
      [](const auto& c) -> py::object {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return py::none();
        } else if constexpr (std::is_same_v<T, EnvyPair>) {
          return py::dict(py::arg("type") = "envy_pair", py::arg("envious") = c.envious,
                          py::arg("envied") = c.envied);
        } else if constexpr (std::is_same_v<T, DominatingAssignment>) {
          const auto owners = c.assignment.owners();
          return py::dict(py::arg("type") = "dominating_assignment",
                          py::arg("owner") = std::vector<AgentIndex>(owners.begin(), owners.end()));
        } else if constexpr (std::is_same_v<T, PriceSupport>) {
          return py::dict(py::arg("type") = "price_support", py::arg("prices") = fractions(c.prices.values()));
        } else if constexpr (std::is_same_v<T, ViolatingBundle>) {
          return py::dict(py::arg("type") = "violating_bundle", py::arg("agent") = c.agent,
                          py::arg("objects") = c.objects);
        } else {
          return py::dict(py::arg("type") = "kkt_violation", py::arg("agent") = c.agent,
                          py::arg("object") = c.object ? py::object(py::int_(*c.object)) : py::none(),
                          py::arg("gap") = fraction(c.gap));
        }
      },
      cert);
}

py::dict verdict(const Verdict& v) {
  return py::dict(py::arg("holds") = v.holds, py::arg("certificate") = certificate(v.certificate));
}

py::dict search_result(const SearchResult& r) {
  const auto owners = r.best.owners();
  return py::dict(py::arg("owner") = std::vector<AgentIndex>(owners.begin(), owners.end()),
                  py::arg("welfare") = fraction(r.welfare), py::arg("nodes_explored") = r.nodes_explored,
                  py::arg("optimal") = r.optimal);
}

py::object owner_or_none(const std::optional<DiscreteAssignment>& y) {
  if (!y) return py::none();
  const auto owners = y->owners();
  return py::cast(std::vector<AgentIndex>(owners.begin(), owners.end()));
}

py::dict solve(const Instance& inst, double tolerance, std::size_t max_iterations, double kkt_tolerance,
               std::optional<std::uint64_t> seed) {
  SolverConfig cfg;
  cfg.convergence_tolerance = tolerance;
  cfg.max_iterations = max_iterations;
  cfg.kkt_tolerance = kkt_tolerance;
  cfg.seed = seed;
  EquilibriumSolution sol;
  {
    py::gil_scoped_release release;
    sol = solve_eg(inst, cfg);
  }
  std::vector<std::vector<double>> x(inst.agents());
  for (AgentIndex i = 0; i < inst.agents(); ++i) {
    const auto row = sol.allocation.row(i);
    x[i].assign(row.begin(), row.end());
  }
  py::object exact = py::none();
  if (sol.exact) {
    py::list shares;
    for (AgentIndex i = 0; i < inst.agents(); ++i) shares.append(fractions(sol.exact->allocation.row(i)));
    exact = py::dict(py::arg("allocation") = shares, py::arg("utilities") = fractions(sol.exact->utilities),
                     py::arg("prices") = fractions(sol.exact->prices.values()),
                     py::arg("nash_welfare") = fraction(nash_welfare(inst, sol.exact->allocation)));
  }
  return py::dict(py::arg("allocation") = x, py::arg("utilities") = sol.utilities,
                  py::arg("prices") = sol.prices, py::arg("iterations") = sol.iterations,
                  py::arg("kkt_residual") = sol.kkt_residual, py::arg("exact") = exact);
}

}  // namespace

PYBIND11_MODULE(_ceei, m) {
  m.doc() = "Exact fair-division and market-equilibrium toolkit";

  static py::exception<Error> base(m, "CeeiError");
  static py::exception<InvariantError> invariant(m, "InvariantError", base.ptr());
  static py::exception<NonConvergence> nonconv(m, "NonConvergence", base.ptr());
  static py::exception<InstanceTooLarge> too_large(m, "InstanceTooLarge", base.ptr());
  static py::exception<InconclusiveSearch> inconclusive(m, "InconclusiveSearch", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvariantError& e) {
      PyErr_SetString(invariant.ptr(), e.what());
    } catch (const NonConvergence& e) {
      PyErr_SetString(nonconv.ptr(), e.what());
    } catch (const InstanceTooLarge& e) {
      PyErr_SetString(too_large.ptr(), e.what());
    } catch (const InconclusiveSearch& e) {
      PyErr_SetString(inconclusive.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(base.ptr(), e.what());
    }
  });

  py::class_<Instance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("utilities"),
           "Utility matrix given as rows of ints, Fractions or \"a/b\" strings.")
      .def_property_readonly("agents", &Instance::agents)
      .def_property_readonly("objects", &Instance::objects)
      .def_property_readonly("utilities",
                             [](const Instance& inst) {
                               py::list rows;
                               for (AgentIndex i = 0; i < inst.agents(); ++i) rows.append(fractions(inst.row(i)));
                               return rows;
                             })
      .def("violations",
           [](const Instance& inst) {
             std::vector<std::string> out;
             for (const auto& v : validate_instance(inst)) out.push_back(v.describe());
             return out;
           })
      .def("to_json", &serialize_instance)
      .def_static("from_json", [](const std::string& text) { return parse_instance(text); })
      .def("digest", &instance_digest)
      .def(py::self == py::self)
      .def("__repr__", [](const Instance& inst) {
        return "Instance(agents=" + std::to_string(inst.agents()) +
               ", objects=" + std::to_string(inst.objects()) + ")";
      });

  m.def("solve_eg", &solve, py::arg("instance"), py::arg("tolerance") = 1e-10,
        py::arg("max_iterations") = 100000, py::arg("kkt_tolerance") = 1e-8, py::arg("seed") = py::none(),
        "Fractional market equilibrium with unit budgets.");

  m.def("nash_welfare", [](const Instance& inst, const std::vector<AgentIndex>& owner) {
    return fraction(nash_welfare(inst, make_assignment(inst, owner)));
  });
  m.def("agent_utilities", [](const Instance& inst, const std::vector<AgentIndex>& owner) {
    return fractions(agent_utilities(inst, make_assignment(inst, owner)));
  });

  m.def("is_envy_free", [](const Instance& inst, const std::vector<AgentIndex>& owner) {
    return verdict(is_envy_free(inst, make_assignment(inst, owner)));
  });
  m.def(
      "is_pareto_optimal",
      [](const Instance& inst, const std::vector<AgentIndex>& owner, std::uint64_t limit) {
        return verdict(is_pareto_optimal_discrete(inst, make_assignment(inst, owner), limit));
      },
      py::arg("instance"), py::arg("owner"), py::arg("limit") = kDefaultParetoLimit);
  m.def("verify_ceei_frac", [](const Instance& inst, const std::vector<AgentIndex>& owner) {
    return verdict(verify_ceei_frac(inst, make_assignment(inst, owner)));
  });
  m.def(
      "verify_ceei_disc",
      [](const Instance& inst, const std::vector<AgentIndex>& owner, std::uint64_t limit) {
        return verdict(verify_ceei_disc(inst, make_assignment(inst, owner), limit));
      },
      py::arg("instance"), py::arg("owner"), py::arg("limit") = kDefaultBundleLimit);

  m.def(
      "brute_force_max_nash",
      [](const Instance& inst, std::uint64_t limit) { return search_result(brute_force_max_nash(inst, limit)); },
      py::arg("instance"), py::arg("limit") = kDefaultEnumerationLimit);
  m.def(
      "max_nash_discrete",
      [](const Instance& inst, std::uint64_t max_nodes, double max_seconds) {
        SearchBudget budget{max_nodes, max_seconds};
        SearchResult r;
        {
          py::gil_scoped_release release;
          r = max_nash_discrete(inst, budget);
        }
        return search_result(r);
      },
      py::arg("instance"), py::arg("max_nodes") = SearchBudget{}.max_nodes, py::arg("max_seconds") = 0.0);
  m.def(
      "exists_ceei_frac_discrete",
      [](const Instance& inst, std::uint64_t max_nodes, double max_seconds) {
        return owner_or_none(exists_ceei_frac_discrete(inst, SearchBudget{max_nodes, max_seconds}));
      },
      py::arg("instance"), py::arg("max_nodes") = SearchBudget{}.max_nodes, py::arg("max_seconds") = 0.0);
  m.def("binary_max_nash", [](const Instance& inst) { return search_result(binary_max_nash(inst)); });
  m.def("find_ceei_disc_identical",
        [](const Instance& inst) { return owner_or_none(find_ceei_disc_identical(inst)); });
  m.def(
      "exists_ceei_disc_bruteforce",
      [](const Instance& inst, std::uint64_t limit) -> py::object {
        const auto w = exists_ceei_disc_bruteforce(inst, limit);
        if (!w) return py::none();
        return py::dict(py::arg("owner") = owner_or_none(w->assignment),
                        py::arg("prices") = fractions(w->prices.values()));
      },
      py::arg("instance"), py::arg("limit") = kDefaultEnumerationLimit);

  m.def("gen_random", &gen_random, py::arg("agents"), py::arg("objects"), py::arg("max_utility") = 100,
        py::arg("binary") = false, py::arg("seed") = 0);
  m.def("from_partition", [](const std::vector<std::uint64_t>& values) { return from_partition({values}); });
  m.def(
      "from_three_partition",
      [](const std::vector<std::uint64_t>& weights, std::uint64_t bound) {
        return from_three_partition({weights, bound});
      },
      py::arg("weights"), py::arg("bound"));
  m.def(
      "planted_three_partition",
      [](std::size_t groups, std::uint64_t bound, std::uint64_t seed) {
        const auto in = planted_three_partition(groups, bound, seed);
        return py::make_tuple(in.weights, in.bound);
      },
      py::arg("groups"), py::arg("bound"), py::arg("seed") = 0);
  m.def("separation_example", &separation_example);
  m.def("binary_gap_example", &binary_gap_example);
}
