// varmax: sharp variance bounds for bounded datasets with a known mean,
// witness construction, and feasibility audits of reported summary
// statistics.

#include "varmax/audit.hpp"
#include "varmax/bounds.hpp"
#include "varmax/feasibility.hpp"
#include "varmax/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace varmax;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitInfeasibleInstance = 4;
constexpr int kExitMismatch = 5;

std::string both(const Rational& r) {
    return to_fraction_string(r) + " (" + to_decimal_string(r) + ")";
}

nlohmann::ordered_json value_json(const Rational& r) {
    return {{"rational", to_fraction_string(r)}, {"decimal", to_decimal_string(r)}};
}

struct BoundArgs {
    std::int64_t n = 0;
    std::string mean, min, max;
    bool sample = false;
    bool json = false;
};

int run_bound(const BoundArgs& args, bool witness_only) {
    if (args.sample && args.n < 2)
        throw CLI::ValidationError("--sample needs --n of at least 2");
    Rational mean = parse_decimal(args.mean);
    Rational lo = parse_decimal(args.min);
    Rational hi = parse_decimal(args.max);
    ProblemSpec spec(args.n, mean, BoundsSpec(lo, hi));

    if (witness_only) {
        auto [shape, data] = witness_dataset(spec);
        if (args.json) {
            nlohmann::ordered_json j;
            nlohmann::ordered_json values = nlohmann::ordered_json::array();
            for (const auto& x : data.values()) values.push_back(to_decimal_string(x));
            j["witness"] = std::move(values);
            j["mean"] = value_json(data.mean());
            j["population_variance"] = value_json(data.population_variance());
            j["count_at_max"] = shape.count_at_max;
            j["count_at_min"] = shape.count_at_min;
            if (shape.has_interior)
                j["interior_value"] = value_json(lo + (hi - lo) * shape.interior_unit);
            std::cout << j.dump(2) << "\n";
            return kExitOk;
        }
        std::ostringstream line;
        for (size_t i = 0; i < data.values().size(); ++i) {
            if (i) line << " ";
            line << to_decimal_string(data.values()[i]);
        }
        std::cout << line.str() << "\n";
        std::cout << "mean: " << both(data.mean()) << "\n";
        std::cout << "population variance: " << both(data.population_variance())
                  << "\n";
        return kExitOk;
    }

    Rational sharp = max_variance(spec);
    Rational bd = bhatia_davis(mean, lo, hi);
    Rational width = spec.bounds.width();
    Rational unit_mean = spec.unit_mean();
    Rational scaled_n_mean = Rational(args.n) * unit_mean;
    Rational frac = frac_part(scaled_n_mean);
    BigInt count_at_max = floor_int(scaled_n_mean);
    Envelope env = envelope(args.n, unit_mean);
    Rational env_lo = width * width * env.lo;
    Rational env_hi = width * width * env.hi;

    if (args.json) {
        nlohmann::ordered_json j;
        j["n"] = args.n;
        j["mean"] = value_json(mean);
        j["min"] = value_json(lo);
        j["max"] = value_json(hi);
        j["sharp_max_variance"] = value_json(sharp);
        j["bhatia_davis"] = value_json(bd);
        j["envelope"] = {{"lower", value_json(env_lo)}, {"upper", value_json(env_hi)}};
        j["frac_part"] = value_json(frac);
        j["count_at_max"] = count_at_max.str();
        if (args.sample)
            j["sharp_max_variance_sample"] =
                value_json(sharp * Rational(args.n) / Rational(args.n - 1));
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    }

    std::cout << "sharp max variance: " << both(sharp) << "\n";
    std::cout << "bhatia-davis bound: " << both(bd) << "\n";
    std::cout << "envelope: [" << both(env_lo) << ", " << both(env_hi) << "]\n";
    std::cout << "fractional part a: " << both(frac) << "\n";
    std::cout << "count at max k: " << count_at_max.str() << "\n";
    if (args.sample)
        std::cout << "sample max variance: "
                  << both(sharp * Rational(args.n) / Rational(args.n - 1)) << "\n";
    return kExitOk;
}

struct CheckArgs {
    std::int64_t n = 0;
    std::string mean, sd, min, max;
    std::string convention = "population";
    std::string mode = "bounds";
    bool exact_mean = false;
    bool exact_sd = false;
    int mean_decimals = -1;
    int sd_decimals = -1;
    bool json = false;
};

ReportedStats stats_from_args(const CheckArgs& args) {
    ReportedStats stats;
    stats.n = args.n;
    stats.mean = RoundedValue::parse(
        args.mean,
        args.mean_decimals >= 0 ? std::optional<int>(args.mean_decimals) : std::nullopt,
        args.exact_mean);
    stats.sd = RoundedValue::parse(
        args.sd,
        args.sd_decimals >= 0 ? std::optional<int>(args.sd_decimals) : std::nullopt,
        args.exact_sd);
    stats.min = parse_decimal(args.min);
    stats.max = parse_decimal(args.max);
    if (args.convention == "population") stats.convention = Convention::Population;
    else if (args.convention == "sample") stats.convention = Convention::Sample;
    else throw CLI::ValidationError("--convention must be population or sample");
    if (args.mode == "bounds") stats.semantics = BoundsSemantics::BoundsOnly;
    else if (args.mode == "attained") stats.semantics = BoundsSemantics::AttainedExtremes;
    else throw CLI::ValidationError("--mode must be bounds or attained");
    return stats;
}

int run_check(const CheckArgs& args) {
    FeasibilityVerdict v = check(stats_from_args(args));
    if (args.json) {
        std::cout << render_verdict_json(v) << "\n";
    } else {
        switch (v.status) {
            case FeasibilityStatus::Feasible: std::cout << "status: feasible\n"; break;
            case FeasibilityStatus::Infeasible: std::cout << "status: infeasible\n"; break;
            case FeasibilityStatus::InvalidInput:
                std::cout << "status: invalid input\n";
                break;
        }
        if (v.status != FeasibilityStatus::InvalidInput) {
            std::cout << "max attainable variance: " << both(v.max_attainable_variance)
                      << "\n";
            if (v.min_required_variance > 0)
                std::cout << "min required variance: " << both(v.min_required_variance)
                          << "\n";
            std::cout << "reported variance window: ["
                      << both(v.reported_variance_window.lower) << ", "
                      << both(v.reported_variance_window.upper) << "]\n";
            std::cout << "margin: " << both(v.margin) << "\n";
        }
        if (v.witness) {
            std::cout << "witness:";
            for (const auto& x : v.witness->values())
                std::cout << " " << to_decimal_string(x);
            std::cout << "\n";
        }
        if (!v.message.empty()) std::cout << "message: " << v.message << "\n";
    }
    switch (v.status) {
        case FeasibilityStatus::Feasible: return kExitOk;
        case FeasibilityStatus::Infeasible: return kExitInfeasible;
        case FeasibilityStatus::InvalidInput: return kExitInfeasibleInstance;
    }
    return kExitUsage;
}

struct AuditArgs {
    std::string path;
    std::string out;
    std::string format = "csv";
    bool no_fail = false;
    int jobs = 1;
};

int run_audit_cmd(const AuditArgs& args) {
    std::ifstream in(args.path);
    if (!in) {
        std::cerr << "cannot open audit file: " << args.path << "\n";
        return kExitParse;
    }
    AuditFile file;
    try {
        file = parse_audit_csv(in);
    } catch (const AuditFormatError& e) {
        std::cerr << "malformed audit file: " << e.what() << "\n";
        return kExitParse;
    }
    auto outcomes = run_audit(file, args.jobs);
    std::string rendered = args.format == "json" ? render_audit_jsonl(outcomes)
                                                 : render_audit_csv(outcomes);
    if (args.out.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(args.out);
        if (!out) {
            std::cerr << "cannot open output file: " << args.out << "\n";
            return kExitParse;
        }
        out << rendered;
        AuditSummary s = summarize(outcomes);
        std::cout << "rows=" << s.rows << " feasible=" << s.feasible
                  << " infeasible=" << s.infeasible << " invalid=" << s.invalid
                  << "\n";
    }
    AuditSummary s = summarize(outcomes);
    if (s.infeasible > 0 && !args.no_fail) return kExitInfeasible;
    return kExitOk;
}

struct CurveArgs {
    std::string mean, min, max;
    std::int64_t n_from = 0;
    std::int64_t n_to = 0;
    std::string out;
};

int run_curve(const CurveArgs& args) {
    if (args.n_from > args.n_to) {
        std::cerr << "--n-from must not exceed --n-to\n";
        return kExitUsage;
    }
    auto points = curve_points(parse_decimal(args.mean), parse_decimal(args.min),
                               parse_decimal(args.max), args.n_from, args.n_to);
    std::string rendered = render_curve_csv(points);
    if (args.out.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream out(args.out);
        if (!out) {
            std::cerr << "cannot open output file: " << args.out << "\n";
            return kExitParse;
        }
        out << rendered;
    }
    return kExitOk;
}

struct VerifyArgs {
    std::int64_t n_max = 20;
    std::int64_t den_max = 8;
    std::uint64_t seed = 0;
    bool seeded = false;
};

int run_verify(const VerifyArgs& args) {
    std::uint64_t instances = 0;
    for (std::int64_t n = 1; n <= args.n_max; ++n) {
        for (std::int64_t q = 1; q <= args.den_max; ++q) {
            for (std::int64_t p = 0; p <= q; ++p) {
                Rational c(p, q);
                ProblemSpec spec(n, c, BoundsSpec(Rational(0), Rational(1)));
                Rational closed = max_variance(spec);
                Rational enumerated = vertex_max(spec).best_variance;
                ++instances;
                if (closed != enumerated) {
                    std::cerr << "mismatch at n=" << n << " mean=" << p << "/" << q
                              << ": closed form " << to_fraction_string(closed)
                              << " vs enumeration " << to_fraction_string(enumerated)
                              << "\n";
                    return kExitMismatch;
                }
            }
        }
    }
    std::cout << "verified " << instances << " instances: all match exactly\n";

    if (args.seeded) {
        std::mt19937_64 rng(args.seed);
        const int spot_checks = 25;
        for (int i = 0; i < spot_checks; ++i) {
            std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 29);
            std::int64_t q = 1 + static_cast<std::int64_t>(rng() % 12);
            std::int64_t p = static_cast<std::int64_t>(rng() % (q + 1));
            ProblemSpec spec(n, Rational(p, q), BoundsSpec(Rational(0), Rational(1)));
            double closed = to_double(max_variance(spec));
            double climbed = to_double(hill_climb_max(spec, 20, rng()).best_variance);
            if (std::abs(closed - climbed) > 1e-6) {
                std::cerr << "hill-climb miss at n=" << n << " mean=" << p << "/" << q
                          << ": closed form " << closed << " vs climb " << climbed
                          << "\n";
                return kExitMismatch;
            }
        }
        std::cout << "hill-climb spot checks: " << spot_checks << "/" << spot_checks
                  << " within 1e-06\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp variance bounds and summary-statistics feasibility checks"};
    app.require_subcommand(1);

    BoundArgs bound_args;
    auto* bound = app.add_subcommand("bound", "Sharp max variance for (n, mean, min, max)");
    bound->add_option("--n", bound_args.n, "dataset length")->required();
    bound->add_option("--mean", bound_args.mean, "mean (decimal string)")->required();
    bound->add_option("--min", bound_args.min, "lower bound")->required();
    bound->add_option("--max", bound_args.max, "upper bound")->required();
    bound->add_flag("--sample", bound_args.sample, "also print the sample-convention value");
    bound->add_flag("--json", bound_args.json, "JSON output");

    BoundArgs witness_args;
    auto* witness = app.add_subcommand("witness", "Dataset attaining the sharp bound");
    witness->add_option("--n", witness_args.n, "dataset length")->required();
    witness->add_option("--mean", witness_args.mean, "mean (decimal string)")->required();
    witness->add_option("--min", witness_args.min, "lower bound")->required();
    witness->add_option("--max", witness_args.max, "upper bound")->required();
    witness->add_flag("--json", witness_args.json, "JSON output");

    CheckArgs check_args;
    auto* chk = app.add_subcommand("check", "Feasibility of reported (n, mean, sd, min, max)");
    chk->add_option("--n", check_args.n, "dataset length")->required();
    chk->add_option("--mean", check_args.mean, "reported mean")->required();
    chk->add_option("--sd", check_args.sd, "reported standard deviation")->required();
    chk->add_option("--min", check_args.min, "lower bound")->required();
    chk->add_option("--max", check_args.max, "upper bound")->required();
    chk->add_option("--convention", check_args.convention, "population|sample");
    chk->add_option("--mode", check_args.mode, "bounds|attained");
    chk->add_flag("--exact-mean", check_args.exact_mean, "mean is exact, no rounding window");
    chk->add_flag("--exact-sd", check_args.exact_sd, "sd is exact, no rounding window");
    chk->add_option("--mean-decimals", check_args.mean_decimals, "override inferred precision");
    chk->add_option("--sd-decimals", check_args.sd_decimals, "override inferred precision");
    chk->add_flag("--json", check_args.json, "JSON output");

    AuditArgs audit_args;
    auto* audit = app.add_subcommand("audit", "Batch feasibility audit of a CSV file");
    audit->add_option("file", audit_args.path, "input CSV")->required();
    audit->add_option("--out", audit_args.out, "output path (default stdout)");
    audit->add_option("--format", audit_args.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    audit->add_flag("--no-fail", audit_args.no_fail, "exit 0 even with infeasible rows");
    audit->add_option("--jobs", audit_args.jobs, "parallel row evaluation")
        ->check(CLI::PositiveNumber);

    CurveArgs curve_args;
    auto* curve = app.add_subcommand("curve", "Bound-vs-n curve as CSV");
    curve->add_option("--mean", curve_args.mean, "mean (decimal string)")->required();
    curve->add_option("--min", curve_args.min, "lower bound")->required();
    curve->add_option("--max", curve_args.max, "upper bound")->required();
    curve->add_option("--n-from", curve_args.n_from, "first n")->required();
    curve->add_option("--n-to", curve_args.n_to, "last n")->required();
    curve->add_option("--out", curve_args.out, "output path (default stdout)");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Closed form vs enumeration sweep");
    verify->add_option("--n-max", verify_args.n_max, "max dataset length")->required();
    verify->add_option("--den-max", verify_args.den_max, "max mean denominator")->required();
    auto* seed_opt = verify->add_option("--seed", verify_args.seed,
                                        "also run seeded hill-climb spot checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*bound) return run_bound(bound_args, false);
        if (*witness) return run_bound(witness_args, true);
        if (*chk) return run_check(check_args);
        if (*audit) return run_audit_cmd(audit_args);
        if (*curve) return run_curve(curve_args);
        if (*verify) {
            verify_args.seeded = seed_opt->count() > 0;
            return run_verify(verify_args);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasibleInstance;
    } catch (const WindowError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasibleInstance;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
