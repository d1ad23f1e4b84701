//
// Copyright 2026 The Divnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "divnoise/cli.h"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "divnoise/analysis.h"
#include "divnoise/distributions.h"
#include "divnoise/errors.h"
#include "divnoise/rational.h"
#include "divnoise/rng.h"
#include "divnoise/samplers.h"
#include "divnoise/shuffle.h"
#include "divnoise/verify.h"
#include "json.hpp"

namespace divnoise {
namespace {

constexpr std::uint64_t kDefaultSeed = 20260816;

// Twelve significant digits, '.' decimal point regardless of locale.
std::string FormatDouble(double value) {
  std::ostringstream stream;
  stream.imbue(std::locale::classic());
  stream << std::setprecision(12) << value;
  return stream.str();
}

// Rational::Parse with the offending flag named in the error.
Rational ParseRational(const std::string& text, const std::string& flag) {
  try {
    return Rational::Parse(text);
  } catch (const PreconditionError&) {
    throw PreconditionError(flag + ": cannot parse '" + text +
                            "' as a rational");
  }
}

std::uint64_t ResolveSeed(const CLI::Option* seed_opt,
                          std::uint64_t flag_value) {
  if (seed_opt != nullptr && seed_opt->count() > 0) return flag_value;
  if (const char* env = std::getenv("DIVNOISE_SEED")) {
    char* end = nullptr;
    const std::uint64_t parsed = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return parsed;
  }
  return kDefaultSeed;
}

int WithOutput(const std::string& out_path, std::ostream& fallback,
               const std::function<int(std::ostream&)>& body) {
  if (out_path.empty()) return body(fallback);
  std::ofstream file(out_path);
  Require(file.good(), "cannot open output file: " + out_path);
  return body(file);
}

std::string CsvCell(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_float()) return FormatDouble(value.get<double>());
  return value.dump();
}

// One-record report: CSV prints a header row plus one value row; JSON prints
// an object with the same fields.
void EmitReport(
    const std::vector<std::pair<std::string, nlohmann::json>>& fields,
    const std::string& format, std::ostream& out) {
  if (format == "json") {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [key, value] : fields) doc[key] = value;
    out << doc.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    out << (i == 0 ? "" : ",") << fields[i].first;
  }
  out << '\n';
  for (std::size_t i = 0; i < fields.size(); ++i) {
    out << (i == 0 ? "" : ",") << CsvCell(fields[i].second);
  }
  out << '\n';
}

struct CalibrateConfig {
  std::string mechanism;
  std::string eps;
  std::uint64_t delta = 0;
  std::uint64_t hole_r = 0;
  double sensitivity = 1.0;
  std::string format = "csv";
  std::string out_path;
  const CLI::Option* delta_opt = nullptr;
  const CLI::Option* hole_opt = nullptr;
};

int RunCalibrate(const CalibrateConfig& cfg, std::ostream& fallback) {
  const Rational eps = ParseRational(cfg.eps, "--eps");
  const double eps_d = eps.ToDouble();
  std::vector<std::pair<std::string, nlohmann::json>> fields;
  if (cfg.mechanism == "gdl") {
    Require(cfg.delta_opt->count() > 0, "calibrate gdl: --delta is required");
    const GdlParams params = CalibrateGdl(eps_d, cfg.delta);
    const PrivacyBound bound = GdlEpsilon(params, cfg.delta);
    fields = {{"mechanism", "gdl"},
              {"eps", eps_d},
              {"delta", cfg.delta},
              {"beta", params.beta.ToDouble()},
              {"a", params.a.ToDouble()},
              {"certified_eps", bound.eps},
              {"variance",
               GdlVariance(params.beta.ToDouble(), params.a.ToDouble())}};
  } else if (cfg.mechanism == "msdlap") {
    Require(cfg.delta_opt->count() > 0,
            "calibrate msdlap: --delta is required");
    const std::uint64_t hole =
        cfg.hole_opt->count() > 0
            ? cfg.hole_r
            : (eps_d >= 2.0 ? ChooseHoleR(eps_d, cfg.delta) : 0);
    const MsdLapParams params =
        MsdLapParams::Contiguous(eps, cfg.delta, hole);
    fields = {{"mechanism", "msdlap"},
              {"eps", eps_d},
              {"delta", cfg.delta},
              {"r", hole},
              {"certified_eps", MsdLapEpsilon(params)},
              {"variance", MsdLapVariance(params)}};
  } else {
    const ContinuousParams params =
        CalibrateContinuous(eps, cfg.sensitivity);
    fields = {{"mechanism", "cont"},
              {"eps", eps_d},
              {"sensitivity", cfg.sensitivity},
              {"delta_d", params.delta_d},
              {"hole_width", params.hole_width},
              {"certified_eps", eps_d},
              {"variance", params.variance}};
  }
  return WithOutput(cfg.out_path, fallback, [&](std::ostream& out) {
    EmitReport(fields, cfg.format, out);
    return 0;
  });
}

struct MseTableConfig {
  double eps_min = 0.0;
  double eps_max = 0.0;
  double eps_step = 1.0;
  std::vector<std::uint64_t> deltas;
  std::string out_path;
};

int RunMseTable(const MseTableConfig& cfg, std::ostream& fallback) {
  Require(cfg.eps_step > 0.0, "mse_table: --eps-step must be positive");
  Require(cfg.eps_max >= cfg.eps_min,
          "mse_table: --eps-max must be >= --eps-min");
  Require(!cfg.deltas.empty(), "mse_table: at least one --delta is required");
  const std::size_t n_eps = static_cast<std::size_t>(std::floor(
                                (cfg.eps_max - cfg.eps_min) / cfg.eps_step +
                                1e-9)) +
                            1;
  return WithOutput(cfg.out_path, fallback, [&](std::ostream& out) {
    out << "eps,delta,dlap,gdl,msdlap_best_r,dstair_best_r,cont_msdlap\n";
    for (const std::uint64_t delta : cfg.deltas) {
      const double d = static_cast<double>(delta);
      for (std::size_t i = 0; i < n_eps; ++i) {
        const double eps = cfg.eps_min + static_cast<double>(i) * cfg.eps_step;
        const Rational eps_rational = Rational::FromDouble(eps);
        out << FormatDouble(eps) << ',' << delta << ','
            << FormatDouble(1.0 / (std::cosh(eps / d) - 1.0)) << ',';
        if (eps > 2.0 + std::log(d)) {
          out << FormatDouble(CalibratedGdlVariance(eps, delta));
        }
        const std::uint64_t hole = eps >= 2.0 ? ChooseHoleR(eps, delta) : 0;
        out << ','
            << FormatDouble(MsdLapVariance(
                   MsdLapParams::Contiguous(eps_rational, delta, hole)))
            << ',' << FormatDouble(OptimalStaircaseVariance(eps, delta))
            << ',';
        if (eps >= 2.0) {
          out << FormatDouble(CalibrateContinuous(eps_rational, 1.0).variance);
        }
        out << '\n';
      }
    }
    return 0;
  });
}

struct SampleConfig {
  std::string mechanism;
  std::uint64_t n = 10;
  std::uint64_t seed = 0;
  std::string a;
  std::string beta;
  std::string eps;
  std::uint64_t delta = 0;
  std::uint64_t hole_r = 0;
  std::string shape;
  std::string prob;
  std::string prob_exp_neg;
  std::string prob_one_minus_exp_neg;
  double sensitivity = 1.0;
  std::string out_path;
  const CLI::Option* seed_opt = nullptr;
  const CLI::Option* delta_opt = nullptr;
};

int RunSample(const SampleConfig& cfg, std::ostream& fallback) {
  RngStream rng(ResolveSeed(cfg.seed_opt, cfg.seed));
  std::function<std::string(RngStream&)> draw;
  if (cfg.mechanism == "dlap") {
    Require(!cfg.a.empty(), "sample dlap: --a is required");
    const DLapParams params{ParseRational(cfg.a, "--a")};
    draw = [params](RngStream& r) {
      return std::to_string(SampleDLap(r, params));
    };
  } else if (cfg.mechanism == "gdl") {
    Require(!cfg.beta.empty() && !cfg.a.empty(),
            "sample gdl: --beta and --a are required");
    const GdlParams params(ParseRational(cfg.beta, "--beta"),
                           ParseRational(cfg.a, "--a"));
    draw = [params](RngStream& r) {
      return std::to_string(SampleGdl(r, params));
    };
  } else if (cfg.mechanism == "msdlap") {
    Require(!cfg.eps.empty() && cfg.delta_opt->count() > 0,
            "sample msdlap: --eps and --delta are required");
    const MsdLapParams params = MsdLapParams::Contiguous(
        ParseRational(cfg.eps, "--eps"), cfg.delta, cfg.hole_r);
    draw = [params](RngStream& r) {
      return std::to_string(SampleMsdLap(r, params));
    };
  } else if (cfg.mechanism == "nb") {
    Require(!cfg.shape.empty(), "sample nb: --shape is required");
    const int prob_flags = (cfg.prob.empty() ? 0 : 1) +
                           (cfg.prob_exp_neg.empty() ? 0 : 1) +
                           (cfg.prob_one_minus_exp_neg.empty() ? 0 : 1);
    Require(prob_flags == 1,
            "sample nb: exactly one of --prob, --prob-exp-neg, "
            "--prob-one-minus-exp-neg is required");
    TrialProb p = TrialProb::Ratio(Rational(1, 2));
    if (!cfg.prob.empty()) {
      p = TrialProb::Ratio(ParseRational(cfg.prob, "--prob"));
    } else if (!cfg.prob_exp_neg.empty()) {
      p = TrialProb::ExpNeg(ParseRational(cfg.prob_exp_neg, "--prob-exp-neg"));
    } else {
      p = TrialProb::OneMinusExpNeg(ParseRational(
          cfg.prob_one_minus_exp_neg, "--prob-one-minus-exp-neg"));
    }
    const NbParams params(ParseRational(cfg.shape, "--shape"), p);
    draw = [params](RngStream& r) {
      return std::to_string(SampleNb(r, params));
    };
  } else {
    Require(!cfg.eps.empty(), "sample cont: --eps is required");
    const ContinuousParams params = CalibrateContinuous(
        ParseRational(cfg.eps, "--eps"), cfg.sensitivity);
    draw = [params](RngStream& r) {
      return FormatDouble(SampleContinuous(r, params));
    };
  }
  return WithOutput(cfg.out_path, fallback, [&](std::ostream& out) {
    for (std::uint64_t i = 0; i < cfg.n; ++i) {
      out << draw(rng) << '\n';
    }
    return 0;
  });
}

struct ShuffleConfig {
  double eps = 0.0;
  std::uint64_t n = 0;
  double delta_dp = 1e-4;
  std::uint64_t trials = 20;
  std::uint64_t rounds = 100;
  bool aggregated = false;
  std::uint64_t seed = 0;
  std::string transcript_path;
  std::string out_path;
  const CLI::Option* seed_opt = nullptr;
};

int RunShuffle(const ShuffleConfig& cfg, std::ostream& fallback) {
  Require(cfg.trials >= 1, "shuffle: --trials must be >= 1");
  Require(cfg.rounds >= 1, "shuffle: --rounds must be >= 1");
  RngStream rng(ResolveSeed(cfg.seed_opt, cfg.seed));
  std::vector<double> xs(cfg.n);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(cfg.n);
  }
  ExperimentOptions options;
  options.trials = cfg.rounds;
  options.aggregated = cfg.aggregated;
  const int code = WithOutput(cfg.out_path, fallback, [&](std::ostream& out) {
    out << "eps,n,trials,empirical_mse,analytic_bound\n";
    for (std::uint64_t batch = 0; batch < cfg.trials; ++batch) {
      const ShuffleExperiment experiment =
          RunExperiment(rng, xs, cfg.eps, cfg.delta_dp, options);
      out << FormatDouble(cfg.eps) << ',' << cfg.n << ',' << cfg.rounds << ','
          << FormatDouble(experiment.empirical_mse) << ','
          << FormatDouble(experiment.analytic_bound) << '\n';
    }
    return 0;
  });
  if (code == 0 && !cfg.transcript_path.empty()) {
    const ShuffleParams params =
        DeriveShuffleParams(cfg.eps, cfg.delta_dp, cfg.n);
    const MsdLapParams noise = ShuffleNoise(params);
    const Transcript transcript = RunRound(rng, params, &noise, xs);
    std::ofstream file(cfg.transcript_path);
    Require(file.good(),
            "cannot open transcript file: " + cfg.transcript_path);
    WriteTranscriptJsonLines(transcript, params, file);
  }
  return code;
}

struct VerifyConfig {
  std::string suite = "full";
  std::uint64_t seed = 0;
  std::string out_path;
  const CLI::Option* seed_opt = nullptr;
};

int RunVerify(const VerifyConfig& cfg, std::ostream& fallback) {
  const SuiteReport report =
      RunVerificationSuite(ResolveSeed(cfg.seed_opt, cfg.seed));
  return WithOutput(cfg.out_path, fallback, [&](std::ostream& out) {
    WriteSuiteReportJson(report, out);
    return report.all_passed ? 0 : 3;
  });
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Infinitely divisible additive noise for pure differential "
               "privacy: calibration, exact sampling, and verification."};
  app.require_subcommand(1);

  CalibrateConfig cal;
  CLI::App* cal_cmd = app.add_subcommand(
      "calibrate", "Choose mechanism parameters for a privacy budget");
  cal_cmd->add_option("mechanism", cal.mechanism, "gdl, msdlap, or cont")
      ->required()
      ->check(CLI::IsMember({"gdl", "msdlap", "cont"}));
  cal_cmd->add_option("--eps", cal.eps, "privacy budget (rational)")
      ->required();
  cal.delta_opt = cal_cmd->add_option("--delta", cal.delta, "sensitivity");
  cal.hole_opt =
      cal_cmd->add_option("--r", cal.hole_r, "msdlap hole size override");
  cal_cmd->add_option("--sensitivity", cal.sensitivity,
                      "continuous sensitivity (cont only)");
  cal_cmd->add_option("--format", cal.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cal_cmd->add_option("--out", cal.out_path, "output file (default stdout)");

  MseTableConfig mse;
  CLI::App* mse_cmd = app.add_subcommand(
      "mse_table", "Per-mechanism variance table over an epsilon grid");
  mse_cmd->add_option("--eps-min", mse.eps_min, "grid start")->required();
  mse_cmd->add_option("--eps-max", mse.eps_max, "grid end")->required();
  mse_cmd->add_option("--eps-step", mse.eps_step, "grid step (default 1)");
  mse_cmd->add_option("--delta", mse.deltas, "sensitivity values")
      ->required();
  mse_cmd->add_option("--out", mse.out_path, "output file (default stdout)");

  SampleConfig smp;
  CLI::App* smp_cmd =
      app.add_subcommand("sample", "Stream exact samples, one per line");
  smp_cmd->add_option("mechanism", smp.mechanism,
                      "dlap, gdl, msdlap, nb, or cont")
      ->required()
      ->check(CLI::IsMember({"dlap", "gdl", "msdlap", "nb", "cont"}));
  smp_cmd->add_option("--n", smp.n, "number of samples (default 10)");
  smp.seed_opt = smp_cmd->add_option("--seed", smp.seed, "RNG seed");
  smp_cmd->add_option("--a", smp.a, "scale exponent (dlap, gdl)");
  smp_cmd->add_option("--beta", smp.beta, "shape (gdl)");
  smp_cmd->add_option("--eps", smp.eps, "privacy budget (msdlap, cont)");
  smp.delta_opt =
      smp_cmd->add_option("--delta", smp.delta, "sensitivity (msdlap)");
  smp_cmd->add_option("--r", smp.hole_r, "msdlap hole size (default 0)");
  smp_cmd->add_option("--shape", smp.shape, "NB shape r (rational)");
  smp_cmd->add_option("--prob", smp.prob, "NB failure prob p as a ratio");
  smp_cmd->add_option("--prob-exp-neg", smp.prob_exp_neg,
                      "NB failure prob p = e^-gamma");
  smp_cmd->add_option("--prob-one-minus-exp-neg", smp.prob_one_minus_exp_neg,
                      "NB failure prob p = 1 - e^-gamma");
  smp_cmd->add_option("--sensitivity", smp.sensitivity,
                      "continuous sensitivity (cont only)");
  smp_cmd->add_option("--out", smp.out_path, "output file (default stdout)");

  ShuffleConfig shf;
  CLI::App* shf_cmd = app.add_subcommand(
      "shuffle", "Split-and-mix summation experiment, CSV per batch");
  shf_cmd->add_option("--eps", shf.eps, "privacy budget (>= 2)")->required();
  shf_cmd->add_option("--n", shf.n, "number of parties")->required();
  shf_cmd->add_option("--delta-dp", shf.delta_dp,
                      "approximate-DP delta (default 1e-4)");
  shf_cmd->add_option("--trials", shf.trials,
                      "number of batches (default 20)");
  shf_cmd->add_option("--rounds", shf.rounds,
                      "protocol rounds per batch (default 100)");
  shf_cmd->add_flag("--aggregated", shf.aggregated,
                    "skip message passing, simulate the aggregate law");
  shf.seed_opt = shf_cmd->add_option("--seed", shf.seed, "RNG seed");
  shf_cmd->add_option("--transcript-out", shf.transcript_path,
                      "write one round's shuffled messages as JSON lines");
  shf_cmd->add_option("--out", shf.out_path, "output file (default stdout)");

  VerifyConfig ver;
  CLI::App* ver_cmd = app.add_subcommand(
      "verify", "Run the verification suite and emit a JSON report");
  ver_cmd->add_option("--suite", ver.suite, "suite name (full)")
      ->check(CLI::IsMember({"full"}));
  ver.seed_opt = ver_cmd->add_option("--seed", ver.seed, "RNG seed");
  ver_cmd->add_option("--out", ver.out_path, "output file (default stdout)");

  try {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("divnoise");
    for (const std::string& arg : args) argv.push_back(arg.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cal_cmd->parsed()) return RunCalibrate(cal, out);
    if (mse_cmd->parsed()) return RunMseTable(mse, out);
    if (smp_cmd->parsed()) return RunSample(smp, out);
    if (shf_cmd->parsed()) return RunShuffle(shf, out);
    if (ver_cmd->parsed()) return RunVerify(ver, out);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const SamplerAbortError& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

int RunCli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? static_cast<std::size_t>(argc) - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return RunCli(args, std::cout, std::cerr);
}

}  // namespace divnoise
