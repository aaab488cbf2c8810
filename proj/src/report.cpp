#include "qmetro/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "qmetro/optimize.hpp"
#include "qmetro/parity.hpp"
#include "qmetro/qfi.hpp"

namespace qmetro {

std::string format_value(double v) {
  if (std::isnan(v) || std::isinf(v)) {
    return v < 0.0 ? "-inf" : "inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = {
      "model", "n", "r", "eta1", "eta2", "phi",
      "f_q", "quantum_limit", "delta_phi", "delta_phi_repeated", "phi_opt",
      "parity_expectation", "sql", "modified_hl", "classical_limit"};
  return cols;
}

namespace {

std::vector<std::string> record_values(const OutputRecord& r) {
  return {r.model,
          format_value(r.n),
          format_value(r.r),
          format_value(r.eta1),
          format_value(r.eta2),
          format_value(r.phi),
          format_value(r.f_q),
          format_value(r.quantum_limit),
          format_value(r.delta_phi),
          format_value(r.delta_phi_repeated),
          format_value(r.phi_opt),
          format_value(r.parity_expectation),
          format_value(r.sql),
          format_value(r.modified_hl),
          format_value(r.classical_limit)};
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += cells[i];
  }
  return out;
}

std::string json_number(const std::string& formatted) {
  if (formatted == "inf" || formatted == "-inf") {
    return "\"" + formatted + "\"";
  }
  return formatted;
}

}  // namespace

std::string csv_header() { return join_csv(record_columns()); }

std::string to_csv(const OutputRecord& rec) { return join_csv(record_values(rec)); }

std::string to_json(const OutputRecord& rec) {
  const auto& cols = record_columns();
  const auto vals = record_values(rec);
  std::string out = "{";
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += "\"" + cols[i] + "\":";
    out += i == 0 ? "\"" + vals[i] + "\"" : json_number(vals[i]);
  }
  out += "}";
  return out;
}

OutputRecord evaluate_point(const LossyMziConfig& cfg, std::optional<double> budget,
                            std::optional<double> measured_phi) {
  cfg.validate();
  OutputRecord rec;
  if (cfg.eta1 == cfg.eta2) {
    rec.model = "two-arm";
  } else if (cfg.eta2 == 1.0) {
    rec.model = "one-arm";
  } else {
    rec.model = "general";
  }
  rec.n = cfg.n;
  rec.r = cfg.squeeze();
  rec.eta1 = cfg.eta1;
  rec.eta2 = cfg.eta2;

  const QfiResult qfi = qfi_closed(cfg);
  rec.f_q = qfi.f_q;
  rec.quantum_limit = qfi.quantum_limit;

  rec.phi_opt = optimal_phase(cfg.n, cfg.eta1, cfg.eta2);
  rec.phi = measured_phi.value_or(rec.phi_opt);

  LossyMziConfig at_phi = cfg;
  at_phi.phi = rec.phi;
  const ParityResult parity = parity_expectation_closed(at_phi);
  rec.parity_expectation = parity.expectation;
  rec.delta_phi = std::sqrt(parity.variance_phase);

  const double total = budget.value_or(cfg.n);
  const PrecisionReport rep = repeated_error(cfg.n, cfg.eta1, cfg.eta2, total);
  rec.delta_phi_repeated = rep.delta_phi_repeated;
  rec.sql = rep.limits.sql;
  rec.modified_hl = rep.limits.modified_hl;
  rec.classical_limit = rec.model == "general"
                            ? std::numeric_limits<double>::infinity()
                            : rep.limits.classical;
  return rec;
}

std::vector<OutputRecord> run_sweep(const SweepSpec& spec) {
  if (!(spec.lo < spec.hi) || spec.points < 2) {
    throw std::invalid_argument("run_sweep: need lo < hi and at least two points");
  }
  spec.base.validate();
  if (spec.variable == SweepVariable::eta && spec.model == SweepModel::general) {
    throw std::invalid_argument("run_sweep: an eta sweep needs a one-arm or two-arm model");
  }

  std::vector<OutputRecord> out;
  out.reserve(spec.points);
  for (int i = 0; i < spec.points; ++i) {
    const double value = spec.lo + (spec.hi - spec.lo) * i / (spec.points - 1);
    LossyMziConfig cfg = spec.base;
    std::optional<double> measured;
    switch (spec.variable) {
      case SweepVariable::n:
        cfg.n = value;
        break;
      case SweepVariable::eta:
        cfg.eta1 = value;
        cfg.eta2 = spec.model == SweepModel::two_arm ? value : 1.0;
        break;
      case SweepVariable::phi:
        cfg.phi = value;
        measured = value;
        break;
    }
    out.push_back(evaluate_point(cfg, spec.total_photons, measured));
  }
  return out;
}

namespace {

std::vector<double> log_spaced(double lo, double hi, int points) {
  std::vector<double> out;
  out.reserve(points);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i) {
    out.push_back(std::clamp(std::exp(a + (b - a) * i / (points - 1)), lo, hi));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> lin_spaced(double lo, double hi, int points) {
  std::vector<double> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    out.push_back(lo + (hi - lo) * i / (points - 1));
  }
  return out;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string render(OutputFormat format) const {
    std::ostringstream os;
    if (format == OutputFormat::csv) {
      os << join_csv(columns) << '\n';
      for (const auto& row : rows) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (double v : row) {
          cells.push_back(format_value(v));
        }
        os << join_csv(cells) << '\n';
      }
    } else {
      for (const auto& row : rows) {
        os << '{';
        for (size_t i = 0; i < columns.size(); ++i) {
          if (i > 0) {
            os << ',';
          }
          os << '"' << columns[i] << "\":" << json_number(format_value(row[i]));
        }
        os << "}\n";
      }
    }
    return os.str();
  }
};

Table fig2_left(const FigureSpec& spec) {
  Table t;
  t.columns = {"n", "sql", "modified_hl", "quantum_limit_two_arm", "quantum_limit_one_arm"};
  for (double n : log_spaced(0.5, 100.0, spec.points)) {
    const auto lim = reference_limits(n, spec.eta, LossModel::two_arm);
    t.rows.push_back({n, lim.sql, lim.modified_hl,
                      qfi_equal_loss(n, spec.eta).quantum_limit,
                      qfi_one_arm(n, spec.eta).quantum_limit});
  }
  return t;
}

Table fig2_right(const FigureSpec& spec) {
  Table t;
  t.columns = {"eta",          "sql",
               "modified_hl",  "quantum_limit_two_arm",
               "quantum_limit_one_arm", "classical_two_arm",
               "classical_one_arm"};
  for (double eta : lin_spaced(0.01, 1.0, spec.points)) {
    const auto two = reference_limits(spec.n, eta, LossModel::two_arm);
    const auto one = reference_limits(spec.n, eta, LossModel::one_arm);
    t.rows.push_back({eta, two.sql, two.modified_hl,
                      qfi_equal_loss(spec.n, eta).quantum_limit,
                      qfi_one_arm(spec.n, eta).quantum_limit, two.classical, one.classical});
  }
  return t;
}

Table fig3_left(const FigureSpec& spec) {
  Table t;
  t.columns = {"eta", "n", "phi_opt"};
  for (double eta : lin_spaced(0.9, 0.999, 20)) {
    for (double n : log_spaced(1.0, 100.0, spec.points)) {
      t.rows.push_back({eta, n, optimal_phase(n, eta, 1.0)});
    }
  }
  return t;
}

Table fig3_right(const FigureSpec& spec) {
  Table t;
  t.columns = {"n", "classical_limit", "quantum_limit", "parity_delta_phi"};
  for (double n : log_spaced(1.0, 100.0, spec.points)) {
    const auto lim = reference_limits(n, spec.eta, LossModel::one_arm);
    const auto rep = repeated_error(n, spec.eta, 1.0, n);  // single shot
    t.rows.push_back({n, lim.classical, qfi_one_arm(n, spec.eta).quantum_limit,
                      rep.delta_phi_single});
  }
  return t;
}

Table fig4(const FigureSpec& spec) {
  Table t;
  t.columns = {"n", "classical_limit", "quantum_limit", "parity_delta_phi"};
  const double budget = spec.total_photons;
  const double classical =
      (1.0 + std::sqrt(spec.eta)) / (2.0 * std::sqrt(budget * spec.eta));
  for (double n : log_spaced(0.1, budget, spec.points)) {
    const auto rep = repeated_error(n, spec.eta, 1.0, budget);
    const double quantum = 1.0 / std::sqrt((budget / n) * rep.f_q);
    t.rows.push_back({n, classical, quantum, rep.delta_phi_repeated});
  }
  return t;
}

}  // namespace

std::string figure_table(const FigureSpec& spec, OutputFormat format) {
  if (spec.id == "fig2_left") {
    return fig2_left(spec).render(format);
  }
  if (spec.id == "fig2_right") {
    return fig2_right(spec).render(format);
  }
  if (spec.id == "fig3_left") {
    return fig3_left(spec).render(format);
  }
  if (spec.id == "fig3_right") {
    return fig3_right(spec).render(format);
  }
  if (spec.id == "fig4") {
    return fig4(spec).render(format);
  }
  throw std::invalid_argument("figure_table: unknown figure id " + spec.id);
}

}  // namespace qmetro
