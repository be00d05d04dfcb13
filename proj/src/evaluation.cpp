#include "biplot/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include <nlohmann/json.hpp>

#include "biplot/errors.hpp"
#include "biplot/procrustes.hpp"

namespace biplot {

EvaluationRecord evaluate_pair(const Config& config, const Config& target) {
    if (config.rows() != target.rows())
        throw DataError("evaluate: config has " + std::to_string(config.rows()) +
                        " rows, target has " + std::to_string(target.rows()));
    if (config.rows() < 2)
        throw NumericError("evaluate: need at least 2 matched rows");

    const RowVector2 mu_t = target.colwise().mean();
    const Config T_c = target.rowwise() - mu_t;
    const double target_ss = T_c.squaredNorm();
    if (target_ss <= 0.0)
        throw NumericError("evaluate: target configuration has zero variance");

    const auto T = orthogonal_procrustes(config, target, /*allow_scale=*/true);
    const Config A = apply_transform(T, config);
    const Config A_c = A.rowwise() - RowVector2(A.colwise().mean());

    EvaluationRecord rec;
    const Config D = A - target;
    const double m2 = double(2 * config.rows());

    rec.PS = D.squaredNorm() / target_ss;
    rec.CC = (A_c.array() * T_c.array()).sum() / (A_c.norm() * T_c.norm());
    rec.AMB = D.array().abs().sum() / m2;
    rec.MB = D.sum() / m2;
    rec.RMSB = std::sqrt(D.squaredNorm() / m2);
    return rec;
}

EvaluationReport evaluate_series(const AlignmentResult& aligned) {
    if (aligned.aligned_configs.size() != aligned.aligned_states.size())
        throw DataError("evaluate: alignment result is incomplete");
    EvaluationReport report;
    report.records.reserve(aligned.aligned_states.size());
    for (size_t i = 0; i < aligned.aligned_states.size(); ++i) {
        auto rec = evaluate_pair(aligned.aligned_configs[i], aligned.consensus);
        rec.level = aligned.aligned_states[i].level;
        report.records.push_back(std::move(rec));
    }
    return report;
}

namespace {

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    std::string s(buf);
    if (s == "-0.0000") s = "0.0000";
    return s;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string format_measures_table(const EvaluationReport& report) {
    static const char* names[] = {"PS", "CC", "AMB", "MB", "RMSB"};
    std::vector<std::string> headers;
    headers.reserve(report.records.size());
    size_t width = 7;
    for (const auto& r : report.records) {
        headers.push_back("Target vs. " + r.level);
        width = std::max(width, headers.back().size());
    }
    std::ostringstream out;
    auto cell = [&](const std::string& s) {
        out << "  ";
        for (size_t i = s.size(); i < width; ++i) out << ' ';
        out << s;
    };
    out << "Measure";
    for (const auto& h : headers) cell(h);
    out << '\n';
    for (int row = 0; row < 5; ++row) {
        out << names[row];
        for (size_t i = std::strlen(names[row]); i < 7; ++i) out << ' ';
        for (const auto& r : report.records) {
            const double v = row == 0 ? r.PS : row == 1 ? r.CC : row == 2 ? r.AMB
                             : row == 3 ? r.MB : r.RMSB;
            cell(fixed4(v));
        }
        out << '\n';
    }
    return out.str();
}

std::string format_measures_csv(const EvaluationReport& report) {
    nlohmann::json num;  // reuse the serializer for shortest round-trip doubles
    std::ostringstream out;
    out << "level,PS,CC,AMB,MB,RMSB\n";
    auto dump = [&](double v) {
        num = v;
        out << ',' << num.dump();
    };
    for (const auto& r : report.records) {
        out << csv_field(r.level);
        dump(r.PS);
        dump(r.CC);
        dump(r.AMB);
        dump(r.MB);
        dump(r.RMSB);
        out << '\n';
    }
    return out.str();
}

std::string format_measures_json(const EvaluationReport& report) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : report.records) {
        arr.push_back({{"level", r.level},
                       {"PS", r.PS},
                       {"CC", r.CC},
                       {"AMB", r.AMB},
                       {"MB", r.MB},
                       {"RMSB", r.RMSB}});
    }
    return arr.dump(2) + "\n";
}

}  // namespace biplot
