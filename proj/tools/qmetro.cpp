#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qmetro/optimize.hpp"
#include "qmetro/parity.hpp"
#include "qmetro/qfi.hpp"
#include "qmetro/report.hpp"
#include "qmetro/validation.hpp"

namespace {

using namespace qmetro;

struct CommonOpts {
  std::optional<double> n;
  std::optional<double> r;
  std::optional<double> eta1;
  std::optional<double> eta2;
  std::optional<double> eta;
  double phi = 0.0;
  bool phi_given = false;
  std::optional<double> budget;
  std::string model = "one-arm";
  std::string format = "csv";
  std::string out_path;
  std::uint64_t seed = 0;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  auto* n_opt = cmd->add_option("--n", o.n, "Mean photon number of the probe");
  auto* r_opt = cmd->add_option("--r", o.r, "Squeeze parameter (n = 2 sinh^2 r)");
  n_opt->excludes(r_opt);
  r_opt->excludes(n_opt);
  cmd->add_option("--eta1", o.eta1, "Transmissivity of arm 1");
  cmd->add_option("--eta2", o.eta2, "Transmissivity of arm 2");
  cmd->add_option("--eta", o.eta,
                  "Shorthand transmissivity; sets both arms (two-arm) or arm 1 (one-arm)");
  cmd->add_option("--phi", o.phi, "Phase shift, radians")->each([&o](const std::string&) {
    o.phi_given = true;
  });
  cmd->add_option("--N", o.budget, "Total photon budget for repeated runs");
  cmd->add_option("--model", o.model, "Loss model")
      ->check(CLI::IsMember({"two-arm", "one-arm", "general"}))
      ->capture_default_str();
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out_path, "Write output to a file instead of stdout");
  cmd->add_option("--seed", o.seed, "Random seed where a command draws samples")
      ->capture_default_str();
}

LossyMziConfig resolve_config(const CommonOpts& o) {
  double n = 0.0;
  if (o.n) {
    n = *o.n;
  } else if (o.r) {
    n = photon_number_from_squeeze(*o.r);
  } else {
    throw CLI::ValidationError("--n or --r is required");
  }

  double eta1 = 1.0, eta2 = 1.0;
  if (o.eta) {
    if (o.eta1 || o.eta2) {
      throw CLI::ValidationError("--eta conflicts with --eta1/--eta2");
    }
    if (o.model == "one-arm") {
      eta1 = *o.eta;
    } else if (o.model == "two-arm") {
      eta1 = eta2 = *o.eta;
    } else {
      throw CLI::ValidationError("--eta needs --model one-arm or two-arm");
    }
  } else {
    eta1 = o.eta1.value_or(1.0);
    eta2 = o.eta2.value_or(1.0);
  }

  LossyMziConfig cfg{n, eta1, eta2, o.phi};
  try {
    cfg.validate();
  } catch (const std::domain_error& e) {
    throw CLI::ValidationError(e.what());
  }
  return cfg;
}

int emit(const CommonOpts& o, const std::string& body) {
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path);
    if (!f) {
      std::cerr << "error: cannot open " << o.out_path << "\n";
      return 2;
    }
    f << body;
    return 0;
  }
  std::cout << body;
  return 0;
}

int emit_record(const CommonOpts& o, const OutputRecord& rec) {
  std::string body;
  if (o.format == "csv") {
    body = csv_header() + "\n" + to_csv(rec) + "\n";
  } else {
    body = to_json(rec) + "\n";
  }
  return emit(o, body);
}

int emit_records(const CommonOpts& o, const std::vector<OutputRecord>& recs) {
  std::string body;
  if (o.format == "csv") {
    body = csv_header() + "\n";
    for (const auto& rec : recs) {
      body += to_csv(rec) + "\n";
    }
  } else {
    for (const auto& rec : recs) {
      body += to_json(rec) + "\n";
    }
  }
  return emit(o, body);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-estimation toolkit for a squeezed probe in a lossy interferometer"};
  app.require_subcommand(1);

  CommonOpts qfi_o, parity_o, opt_o, fig_o, val_o;

  auto* cmd_qfi = app.add_subcommand("qfi", "Fisher information and precision limits");
  add_common_flags(cmd_qfi, qfi_o);

  auto* cmd_parity = app.add_subcommand("parity", "Parity expectation and estimator error");
  add_common_flags(cmd_parity, parity_o);

  auto* cmd_opt = app.add_subcommand(
      "optimize", "Optimal measurement point, and optimal probe size under a budget");
  add_common_flags(cmd_opt, opt_o);

  CommonOpts sweep_o;
  auto* cmd_sweep = app.add_subcommand("sweep", "Evaluate one variable over a range");
  std::string sweep_var;
  double sweep_from = 0.0, sweep_to = 0.0;
  int sweep_points = 0;
  cmd_sweep->add_option("--var", sweep_var, "Swept variable")
      ->required()
      ->check(CLI::IsMember({"n", "eta", "phi"}));
  cmd_sweep->add_option("--from", sweep_from, "Range start")->required();
  cmd_sweep->add_option("--to", sweep_to, "Range end")->required();
  cmd_sweep->add_option("--points", sweep_points, "Sample count (>= 2)")->required();
  add_common_flags(cmd_sweep, sweep_o);

  auto* cmd_fig = app.add_subcommand("figure", "Reference curve families as data tables");
  std::string fig_id;
  int fig_points = 60;
  cmd_fig
      ->add_option("id", fig_id,
                   "One of fig2_left (error vs n, eta fixed at --eta), fig2_right (error vs "
                   "eta at --n), fig3_left (optimal point surface, one-arm), fig3_right "
                   "(single-shot error vs n at --eta, one-arm), fig4 (repeated error vs n at "
                   "--eta with budget --N)")
      ->required()
      ->check(CLI::IsMember({"fig2_left", "fig2_right", "fig3_left", "fig3_right", "fig4"}));
  cmd_fig->add_option("--points", fig_points, "Samples per curve")->capture_default_str();
  add_common_flags(cmd_fig, fig_o);

  auto* cmd_val = app.add_subcommand("validate", "Cross-route and oracle agreement checks");
  int val_grid = 100;
  cmd_val->add_option("--grid", val_grid, "Random grid size")->capture_default_str();
  add_common_flags(cmd_val, val_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_qfi->parsed()) {
      const LossyMziConfig cfg = resolve_config(qfi_o);
      return emit_record(qfi_o, evaluate_point(cfg, qfi_o.budget,
                                               qfi_o.phi_given
                                                   ? std::optional<double>(qfi_o.phi)
                                                   : std::nullopt));
    }
    if (cmd_parity->parsed()) {
      const LossyMziConfig cfg = resolve_config(parity_o);
      if (!parity_o.phi_given) {
        throw CLI::ValidationError("parity requires --phi");
      }
      return emit_record(parity_o, evaluate_point(cfg, parity_o.budget, parity_o.phi));
    }
    if (cmd_sweep->parsed()) {
      SweepSpec spec;
      if (sweep_var == "n") {
        spec.variable = SweepVariable::n;
      } else if (sweep_var == "eta") {
        spec.variable = SweepVariable::eta;
      } else {
        spec.variable = SweepVariable::phi;
      }
      spec.lo = sweep_from;
      spec.hi = sweep_to;
      spec.points = sweep_points;
      spec.model = sweep_o.model == "two-arm"  ? SweepModel::two_arm
                   : sweep_o.model == "one-arm" ? SweepModel::one_arm
                                                : SweepModel::general;
      // base configuration: swept variable may be left at a placeholder
      CommonOpts base = sweep_o;
      if (spec.variable == SweepVariable::n && !base.n && !base.r) {
        base.n = sweep_from;
      }
      if (spec.variable == SweepVariable::eta && !base.eta && !base.eta1 && !base.eta2) {
        base.eta1 = base.eta2 = 1.0;
      }
      spec.base = resolve_config(base);
      spec.total_photons = sweep_o.budget;
      try {
        return emit_records(sweep_o, run_sweep(spec));
      } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError(e.what());
      }
    }
    if (cmd_opt->parsed()) {
      if (!opt_o.n && !opt_o.r && opt_o.budget) {
        // Budget-only call: search for the optimal probe size.
        double eta1 = 1.0, eta2 = 1.0;
        if (opt_o.eta) {
          if (opt_o.model != "one-arm" && opt_o.model != "two-arm") {
            throw CLI::ValidationError("--eta needs --model one-arm or two-arm");
          }
          eta1 = *opt_o.eta;
          eta2 = opt_o.model == "two-arm" ? *opt_o.eta : 1.0;
        } else {
          eta1 = opt_o.eta1.value_or(1.0);
          eta2 = opt_o.eta2.value_or(1.0);
        }
        const PhotonSearchResult res = optimal_photon_number(*opt_o.budget, eta1, eta2);
        LossyMziConfig cfg{res.n_opt, eta1, eta2, 0.0};
        OutputRecord rec = evaluate_point(cfg, opt_o.budget, std::nullopt);
        if (!res.interior) {
          std::cerr << "note: no interior optimum, boundary of the search grid returned\n";
        }
        return emit_record(opt_o, rec);
      }
      const LossyMziConfig cfg = resolve_config(opt_o);
      return emit_record(opt_o, evaluate_point(cfg, opt_o.budget, std::nullopt));
    }
    if (cmd_fig->parsed()) {
      FigureSpec spec;
      spec.id = fig_id;
      spec.points = fig_points;
      if (fig_o.n) {
        spec.n = *fig_o.n;
      }
      if (fig_o.eta) {
        spec.eta = *fig_o.eta;
      } else if (fig_o.eta1) {
        spec.eta = *fig_o.eta1;
      }
      if (fig_id == "fig3_right" || fig_id == "fig4") {
        spec.eta = fig_o.eta.value_or(fig_o.eta1.value_or(0.99));
      }
      if (fig_o.budget) {
        spec.total_photons = *fig_o.budget;
      }
      const OutputFormat fmt =
          fig_o.format == "json" ? OutputFormat::json : OutputFormat::csv;
      return emit(fig_o, figure_table(spec, fmt));
    }
    if (cmd_val->parsed()) {
      const auto results = run_validation(val_grid, val_o.seed);
      std::ostringstream os;
      for (const auto& c : results) {
        os << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  (" << c.detail << ")\n";
      }
      emit(val_o, os.str());
      return all_passed(results) ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
