#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "htisim/dominance_engine.hpp"
#include "htisim/market_model.hpp"
#include "htisim/order_cloud.hpp"
#include "htisim/pnl_accounting.hpp"
#include "htisim/price_process.hpp"
#include "htisim/rational.hpp"
#include "htisim/run_config.hpp"
#include "htisim/run_io.hpp"
#include "htisim/sim_harness.hpp"
#include "htisim/verify.hpp"

namespace py = pybind11;
using namespace htisim;

namespace {

py::object to_python(const nlohmann::json& value) {
  return py::module_::import("json").attr("loads")(value.dump());
}

py::object to_fraction(const Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(r.numerator(), r.denominator());
}

// Accepts int, Fraction, or a string such as "7/2" or "0.125".
Rational from_python(const py::handle& value) {
  if (py::isinstance<py::str>(value)) return Rational::parse(value.cast<std::string>());
  const py::object f = py::module_::import("fractions").attr("Fraction")(value);
  return Rational(f.attr("numerator").cast<std::int64_t>(), f.attr("denominator").cast<std::int64_t>());
}

// Config from a YAML string, a dict (layered over the defaults), or None.
RunConfig config_from(const py::object& config) {
  if (config.is_none()) return default_config();
  if (py::isinstance<py::dict>(config)) {
    return parse_config(py::module_::import("json").attr("dumps")(config).cast<std::string>());
  }
  return parse_config(config.cast<std::string>());
}

Instrument instrument(const std::string& tick_size, Ticks grid_min, Ticks grid_max) {
  Instrument inst;
  inst.tick_size = Decimal::parse(tick_size);
  inst.grid_min = grid_min;
  inst.grid_max = grid_max;
  inst.validate();
  return inst;
}

py::list verdict_list(const std::vector<Verdict>& verdicts) {
  py::list out;
  for (const auto& v : verdicts) out.append(py::make_tuple(v.clause, v.passed, v.detail));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact PnL accounting and delayed-execution dominance simulation";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<StrandedOrderError>(m, "StrandedOrderError", PyExc_RuntimeError);

  py::enum_<Side>(m, "Side").value("buy", Side::buy).value("sell", Side::sell);

  py::class_<Order>(m, "Order")
      .def(py::init([](Side side, Ticks price, Quantity quantity, OrderId id, TimeStep time) {
             return Order{id, time, side, price, quantity};
           }),
           py::arg("side"), py::arg("price"), py::arg("quantity") = 1, py::arg("id") = 0, py::arg("time") = 0)
      .def_readwrite("id", &Order::id)
      .def_readwrite("time", &Order::time)
      .def_readwrite("side", &Order::side)
      .def_readwrite("price", &Order::price)
      .def_readwrite("quantity", &Order::quantity)
      .def_property_readonly("sign", &Order::sign)
      .def("__eq__", [](const Order& a, const Order& b) { return a == b; })
      .def("__repr__", [](const Order& o) {
        return "Order(" + std::string(to_string(o.side)) + ", price=" + std::to_string(o.price) +
               ", quantity=" + std::to_string(o.quantity) + ")";
      });

  m.def("side_sign", [](Side side) { return side_sign(side); }, "+1 for a sell, -1 for a buy.");

  m.def(
      "price_to_currency",
      [](Ticks price, const std::string& tick_size, Ticks grid_min, Ticks grid_max) {
        return price_to_currency(price, instrument(tick_size, grid_min, grid_max)).to_string();
      },
      py::arg("price_ticks"), py::arg("tick_size") = "0.01", py::arg("grid_min") = 9000,
      py::arg("grid_max") = 11000, "Decimal string of price_ticks * tick_size.");

  m.def("pnl_direct", [](const std::vector<Order>& orders, Ticks price) { return pnl_direct(orders, price).quanta; },
        py::arg("orders"), py::arg("price"), "Sum of s * (p - P) * q, in tick-value quanta.");
  m.def(
      "pnl_via_position",
      [](const std::vector<Order>& orders, Ticks price) { return pnl_via_position(orders, price).quanta; },
      py::arg("orders"), py::arg("price"));

  m.def(
      "match_lots",
      [](const std::vector<Order>& orders, const std::string& method) {
        const auto result = match_lots(orders, method == "lifo" ? MatchMethod::lifo : MatchMethod::fifo);
        py::list matches, unmatched;
        for (const auto& x : result.matches) matches.append(py::make_tuple(x.sell_price, x.buy_price, x.quantity));
        for (const auto& u : result.unmatched) unmatched.append(py::make_tuple(u.sign, u.price, u.quantity));
        return py::make_tuple(matches, unmatched);
      },
      py::arg("orders"), py::arg("method") = "fifo",
      "([(sell_price, buy_price, qty)], [(sign, price, qty)]).");

  m.def(
      "pnl_decomposed",
      [](const std::vector<Order>& orders, Ticks price, const std::string& method) {
        const auto lots = match_lots(orders, method == "lifo" ? MatchMethod::lifo : MatchMethod::fifo);
        const auto b = pnl_decomposed(lots.matches, lots.unmatched, price);
        py::dict out;
        out["realized"] = b.realized.quanta;
        out["unrealized"] = b.unrealized.quanta;
        out["total"] = b.total.quanta;
        return out;
      },
      py::arg("orders"), py::arg("price"), py::arg("method") = "fifo");

  m.def(
      "gravity_center",
      [](const std::vector<Order>& orders) -> py::object {
        CloudStats stats;
        for (const auto& o : orders) stats = cloud_update(stats, o);
        const auto c = htisim::gravity_center(stats);
        return c ? to_fraction(*c) : py::none();
      },
      py::arg("orders"), "Quantity-weighted mean fill price as a Fraction; None for no orders.");

  m.def(
      "minmax",
      [](int sign, const py::object& x, const py::object& y) {
        return to_fraction(htisim::minmax(sign, from_python(x), from_python(y)));
      },
      py::arg("sign"), py::arg("x"), py::arg("y"), "max(x, y) for sign +1, min(x, y) for sign -1.");

  m.def(
      "delay_eligible",
      [](Ticks price, const py::object& gravity, int sign, Ticks tau) {
        const std::optional<Rational> c = gravity.is_none() ? std::nullopt : std::optional(from_python(gravity));
        return htisim::delay_eligible(price, c, sign, tau);
      },
      py::arg("price"), py::arg("gravity"), py::arg("sign"), py::arg("tau"));

  m.def(
      "execution_ready",
      [](Ticks price, const py::object& now, const py::object& at_delay, int sign, Ticks gamma) {
        return htisim::execution_ready(price, from_python(now), from_python(at_delay), sign, gamma);
      },
      py::arg("price"), py::arg("gravity_now"), py::arg("gravity_at_delay"), py::arg("sign"), py::arg("gamma"));

  m.def(
      "default_config", [] { return to_python(config_to_json(default_config())); },
      "The default profile as a dict.");

  m.def(
      "run_simulation",
      [](const py::object& config, std::optional<std::uint64_t> seed, const std::optional<std::string>& out_dir) {
        RunConfig c = config_from(config);
        if (seed) c.run.master_seed = *seed;
        RunReport report;
        {
          py::gil_scoped_release release;
          report = htisim::run_simulation(c, RunOptions{.record_ticks = out_dir && c.run.write_ticks});
          if (out_dir) write_run(report, *out_dir);
        }
        py::dict out = to_python(summary_json(report));
        py::list phases;
        for (const auto& p : report.phases) {
          py::dict row;
          row["phase"] = p.phase_index;
          row["end_time"] = p.end_time;
          row["q_delayed"] = p.delayed_quantity;
          row["diff_quanta"] = p.pnl_diff.quanta;
          row["lower_bound_quanta"] = p.lower_bound.quanta;
          row["n_delayed"] = p.records.size();
          phases.append(row);
        }
        out["phases"] = phases;
        out["passed"] = report.passed();
        return out;
      },
      py::arg("config") = py::none(), py::arg("seed") = py::none(), py::arg("out_dir") = py::none(),
      "Runs one simulation from a YAML string, a dict of overrides, or the defaults.");

  m.def(
      "verify_run",
      [](const std::filesystem::path& dir) {
        std::vector<Verdict> verdicts;
        {
          py::gil_scoped_release release;
          verdicts = htisim::verify_run(dir);
        }
        return verdict_list(verdicts);
      },
      py::arg("run_dir"), "Re-audits written artifacts; [(clause, passed, detail)].");

  m.def(
      "estimate_hitting_time",
      [](const py::object& config, Ticks xi, std::int64_t samples, std::int64_t cap, const std::string& direction,
         std::optional<Ticks> start) {
        const RunConfig c = config_from(config);
        const Ticks from = start.value_or((c.price.grid_min + c.price.grid_max) / 2);
        HittingTimeSummary h;
        {
          py::gil_scoped_release release;
          h = htisim::estimate_hitting_time(c.price, from, xi, direction == "below" ? Direction::below : Direction::above,
                                            samples, cap);
        }
        py::dict out;
        out["samples"] = h.samples;
        out["count_finite"] = h.count_finite;
        out["mean"] = h.mean;
        out["max"] = h.max;
        return out;
      },
      py::arg("config") = py::none(), py::arg("xi") = 100, py::arg("samples") = 1000, py::arg("cap") = 10'000'000,
      py::arg("direction") = "above", py::arg("start") = py::none());
}
