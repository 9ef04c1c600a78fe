#include "varmax/audit.hpp"

#include "varmax/bounds.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <istream>
#include <limits>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace varmax {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current += ch;
        }
    }
    fields.push_back(trim(current));
    return fields;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::int64_t parse_count(const std::string& text) {
    Rational r = parse_decimal(text);
    if (denominator(r) != 1) throw ParseError("expected an integer: " + text);
    BigInt num = numerator(r);
    if (num < 0 || num > BigInt(std::numeric_limits<std::int64_t>::max()))
        throw ParseError("integer out of range: " + text);
    return static_cast<std::int64_t>(num);
}

}  // namespace

AuditFile parse_audit_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw AuditFormatError("empty audit file");
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM

    std::unordered_map<std::string, size_t> columns;
    {
        auto header = split_csv_line(line);
        for (size_t i = 0; i < header.size(); ++i) columns[lower(header[i])] = i;
    }
    for (const char* required : {"id", "n", "mean", "sd", "min", "max"})
        if (!columns.count(required))
            throw AuditFormatError(std::string("audit header is missing column '") +
                                   required + "'");

    auto field = [&](const std::vector<std::string>& row,
                     const char* name) -> std::string {
        auto it = columns.find(name);
        if (it == columns.end() || it->second >= row.size()) return "";
        return row[it->second];
    };

    AuditFile file;
    std::unordered_set<std::string> seen_ids;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);

        AuditRow row;
        row.line = line_no;
        row.id = field(cells, "id");
        if (row.id.empty()) row.id = "line" + std::to_string(line_no);
        try {
            if (field(cells, "id").empty()) throw ParseError("missing id");
            if (!seen_ids.insert(row.id).second)
                throw ParseError("duplicate id '" + row.id + "'");

            ReportedStats stats;
            stats.n = parse_count(field(cells, "n"));

            std::optional<int> mean_decimals;
            if (auto s = field(cells, "mean_decimals"); !s.empty())
                mean_decimals = static_cast<int>(parse_count(s));
            std::optional<int> sd_decimals;
            if (auto s = field(cells, "sd_decimals"); !s.empty())
                sd_decimals = static_cast<int>(parse_count(s));

            stats.mean = RoundedValue::parse(field(cells, "mean"), mean_decimals);
            stats.sd = RoundedValue::parse(field(cells, "sd"), sd_decimals);
            stats.min = parse_decimal(field(cells, "min"));
            stats.max = parse_decimal(field(cells, "max"));

            std::string convention = lower(field(cells, "convention"));
            if (convention.empty() || convention == "population")
                stats.convention = Convention::Population;
            else if (convention == "sample")
                stats.convention = Convention::Sample;
            else
                throw ParseError("unknown convention '" + convention + "'");

            std::string semantics = lower(field(cells, "semantics"));
            if (semantics.empty() || semantics == "bounds")
                stats.semantics = BoundsSemantics::BoundsOnly;
            else if (semantics == "attained")
                stats.semantics = BoundsSemantics::AttainedExtremes;
            else
                throw ParseError("unknown semantics '" + semantics + "'");

            row.stats = std::move(stats);
            row.parse_ok = true;
        } catch (const std::exception& e) {
            row.parse_ok = false;
            row.error = e.what();
        }
        file.rows.push_back(std::move(row));
    }
    return file;
}

namespace {

AuditOutcome outcome_for(const AuditRow& row) {
    AuditOutcome outcome;
    outcome.id = row.id;
    if (!row.parse_ok) {
        outcome.verdict.status = FeasibilityStatus::InvalidInput;
        outcome.verdict.message = row.error;
        return outcome;
    }
    outcome.verdict = check(row.stats);
    return outcome;
}

}  // namespace

std::vector<AuditOutcome> run_audit(const AuditFile& file, int jobs) {
    std::vector<AuditOutcome> out(file.rows.size());
    if (jobs <= 1 || file.rows.size() < 2) {
        for (size_t i = 0; i < file.rows.size(); ++i)
            out[i] = outcome_for(file.rows[i]);
        return out;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < file.rows.size();
             i = next.fetch_add(1))
            out[i] = outcome_for(file.rows[i]);
    };
    size_t thread_count =
        std::min<size_t>(static_cast<size_t>(jobs), file.rows.size());
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

AuditSummary summarize(const std::vector<AuditOutcome>& outcomes) {
    AuditSummary s;
    s.rows = outcomes.size();
    for (const auto& o : outcomes) {
        switch (o.verdict.status) {
            case FeasibilityStatus::Feasible: ++s.feasible; break;
            case FeasibilityStatus::Infeasible: ++s.infeasible; break;
            case FeasibilityStatus::InvalidInput: ++s.invalid; break;
        }
    }
    return s;
}

namespace {

const char* status_name(FeasibilityStatus status) {
    switch (status) {
        case FeasibilityStatus::Feasible: return "feasible";
        case FeasibilityStatus::Infeasible: return "infeasible";
        case FeasibilityStatus::InvalidInput: return "invalid_input";
    }
    return "unknown";
}

nlohmann::ordered_json value_json(const Rational& r) {
    return {{"rational", to_fraction_string(r)}, {"decimal", to_decimal_string(r)}};
}

nlohmann::ordered_json verdict_json(const FeasibilityVerdict& v) {
    nlohmann::ordered_json j;
    j["status"] = status_name(v.status);
    if (v.status == FeasibilityStatus::InvalidInput) {
        j["max_attainable_variance"] = nullptr;
        j["reported_variance_window"] = nullptr;
        j["margin"] = nullptr;
    } else {
        j["max_attainable_variance"] = value_json(v.max_attainable_variance);
        j["reported_variance_window"] = {
            {"lower", value_json(v.reported_variance_window.lower)},
            {"upper", value_json(v.reported_variance_window.upper)}};
        if (v.min_required_variance > 0)
            j["min_required_variance"] = value_json(v.min_required_variance);
        if (v.witness) {
            nlohmann::ordered_json values = nlohmann::ordered_json::array();
            for (const auto& x : v.witness->values())
                values.push_back(to_decimal_string(x));
            j["witness"] = std::move(values);
        }
        j["margin"] = value_json(v.margin);
    }
    if (!v.message.empty()) j["message"] = v.message;
    return j;
}

}  // namespace

std::string render_verdict_json(const FeasibilityVerdict& verdict) {
    return verdict_json(verdict).dump(2);
}

std::string render_audit_csv(const std::vector<AuditOutcome>& outcomes) {
    std::ostringstream out;
    out << "id,status,max_variance_rational,max_variance,var_window_lo,"
           "var_window_hi,margin,message\n";
    for (const auto& o : outcomes) {
        const auto& v = o.verdict;
        out << csv_escape(o.id) << "," << status_name(v.status) << ",";
        if (v.status == FeasibilityStatus::InvalidInput) {
            out << ",,,,";
        } else {
            out << to_fraction_string(v.max_attainable_variance) << ","
                << to_decimal_string(v.max_attainable_variance) << ","
                << to_decimal_string(v.reported_variance_window.lower) << ","
                << to_decimal_string(v.reported_variance_window.upper) << ","
                << to_decimal_string(v.margin);
        }
        out << "," << csv_escape(v.message) << "\n";
    }
    AuditSummary s = summarize(outcomes);
    out << "# rows=" << s.rows << " feasible=" << s.feasible
        << " infeasible=" << s.infeasible << " invalid=" << s.invalid << "\n";
    return out.str();
}

std::string render_audit_jsonl(const std::vector<AuditOutcome>& outcomes) {
    std::ostringstream out;
    for (const auto& o : outcomes) {
        nlohmann::ordered_json j;
        j["id"] = o.id;
        nlohmann::ordered_json body = verdict_json(o.verdict);
        for (auto& [key, value] : body.items()) j[key] = std::move(value);
        out << j.dump() << "\n";
    }
    AuditSummary s = summarize(outcomes);
    nlohmann::ordered_json summary;
    summary["summary"] = {{"rows", s.rows},
                          {"feasible", s.feasible},
                          {"infeasible", s.infeasible},
                          {"invalid", s.invalid}};
    out << summary.dump() << "\n";
    return out.str();
}

std::vector<CurvePoint> curve_points(const Rational& mean, const Rational& m,
                                     const Rational& M, std::int64_t n_from,
                                     std::int64_t n_to) {
    if (n_from < 1 || n_from > n_to)
        throw std::domain_error("curve needs 1 <= n-from <= n-to");
    Rational bd = bhatia_davis(mean, m, M);
    Rational w = M - m;
    std::vector<CurvePoint> points;
    points.reserve(static_cast<size_t>(n_to - n_from + 1));
    for (std::int64_t n = n_from; n <= n_to; ++n) {
        CurvePoint p;
        p.n = n;
        p.sharp_bound = max_variance(ProblemSpec(n, mean, BoundsSpec(m, M)));
        p.bhatia_davis_bound = bd;
        p.envelope_lo = bd - w * w / Rational(4 * n);
        p.gap = bd - p.sharp_bound;
        points.push_back(std::move(p));
    }
    return points;
}

std::string render_curve_csv(const std::vector<CurvePoint>& points) {
    std::ostringstream out;
    out << "n,sharp_bound,bhatia_davis,envelope_lo,gap\n";
    for (const auto& p : points) {
        out << p.n << "," << to_significant_string(p.sharp_bound, 12) << ","
            << to_significant_string(p.bhatia_davis_bound, 12) << ","
            << to_significant_string(p.envelope_lo, 12) << ","
            << to_significant_string(p.gap, 12) << "\n";
    }
    return out.str();
}

}  // namespace varmax
