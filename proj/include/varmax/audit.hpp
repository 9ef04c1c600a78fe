#pragma once

#include "varmax/feasibility.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace varmax {

// Unusable audit input (missing header or required columns). Individual
// bad rows never throw; they become InvalidInput verdicts.
struct AuditFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AuditRow {
    std::string id;
    std::size_t line = 0;  // 1-based line in the input file
    ReportedStats stats;   // meaningful only when parse_ok
    bool parse_ok = false;
    std::string error;
};

struct AuditFile {
    std::vector<AuditRow> rows;
};

// CSV with a required header: id,n,mean,sd,min,max and optional
// convention, semantics, mean_decimals, sd_decimals columns.
AuditFile parse_audit_csv(std::istream& in);

struct AuditOutcome {
    std::string id;
    FeasibilityVerdict verdict;
};

// Evaluates rows (in parallel when jobs > 1) with order-preserving,
// scheduling-independent output.
std::vector<AuditOutcome> run_audit(const AuditFile& file, int jobs);

struct AuditSummary {
    std::size_t rows = 0;
    std::size_t feasible = 0;
    std::size_t infeasible = 0;
    std::size_t invalid = 0;
};

AuditSummary summarize(const std::vector<AuditOutcome>& outcomes);

// One CSV line per verdict plus a trailing "# rows=..." summary comment.
std::string render_audit_csv(const std::vector<AuditOutcome>& outcomes);

// One JSON object per line (stable key order) plus a summary object line.
std::string render_audit_jsonl(const std::vector<AuditOutcome>& outcomes);

// Single-verdict JSON object (the audit row schema without the id).
std::string render_verdict_json(const FeasibilityVerdict& verdict);

struct CurvePoint {
    std::int64_t n = 0;
    Rational sharp_bound;
    Rational bhatia_davis_bound;
    Rational envelope_lo;
    Rational gap;  // bhatia_davis - sharp, in [0, (M-m)^2/(4n)]
};

std::vector<CurvePoint> curve_points(const Rational& mean, const Rational& m,
                                     const Rational& M, std::int64_t n_from,
                                     std::int64_t n_to);

// Header n,sharp_bound,bhatia_davis,envelope_lo,gap; 12 significant digits.
std::string render_curve_csv(const std::vector<CurvePoint>& points);

}  // namespace varmax
