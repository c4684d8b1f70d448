#include "uqfi/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "uqfi/errors.hpp"

namespace uqfi {

namespace {

std::string fmt(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc())
        throw NumericError("failed to format a double for CSV output");
    return std::string(buf, ptr);
}

double parse_double(const std::string& token, const std::string& path, std::size_t line) {
    double v = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw IoError(path + ":" + std::to_string(line) + ": cannot parse number '" + token + "'");
    return v;
}

std::size_t parse_count(const std::string& token, const std::string& path, std::size_t line) {
    std::size_t v = 0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw IoError(path + ":" + std::to_string(line) + ": cannot parse count '" + token + "'");
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

void expect_header(const std::vector<std::string>& got, const std::vector<std::string>& want,
                   const std::string& path) {
    if (got != want) {
        std::ostringstream msg;
        msg << path << ": unexpected header; want";
        for (const auto& w : want) msg << " '" << w << "'";
        throw IoError(msg.str());
    }
}

} // namespace

void write_dataset_csv(const Dataset& data, const std::string& path) {
    auto out = open_out(path);
    out << "y";
    for (std::size_t j = 0; j < data.p(); ++j) out << ",x" << (j + 1);
    out << "\n";
    for (std::size_t i = 0; i < data.n(); ++i) {
        out << fmt(data.y[i]);
        for (std::size_t j = 0; j < data.p(); ++j) out << ',' << fmt(data.x(i, j));
        out << "\n";
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

Dataset read_dataset_csv(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.size() < 2) throw IoError(path + ": dataset needs a header and at least one row");

    auto header = split(lines[0]);
    if (header.size() < 2 || header[0] != "y")
        throw IoError(path + ": dataset header must start with 'y,x1,...'");
    const std::size_t p = header.size() - 1;
    for (std::size_t j = 0; j < p; ++j)
        if (header[j + 1] != "x" + std::to_string(j + 1))
            throw IoError(path + ": feature columns must be named x1..xp in order");

    const std::size_t n = lines.size() - 1;
    Dataset data;
    data.x = Matrix(n, p);
    data.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto tokens = split(lines[i + 1]);
        if (tokens.size() != p + 1)
            throw IoError(path + ":" + std::to_string(i + 2) + ": expected " +
                          std::to_string(p + 1) + " columns, got " + std::to_string(tokens.size()));
        data.y[i] = parse_double(tokens[0], path, i + 2);
        for (std::size_t j = 0; j < p; ++j)
            data.x(i, j) = parse_double(tokens[j + 1], path, i + 2);
    }
    for (double v : data.y)
        if (!std::isfinite(v)) throw IoError(path + ": non-finite outcome value");
    for (double v : data.x.data())
        if (!std::isfinite(v)) throw IoError(path + ": non-finite feature value");
    data.meta.source = "file";
    return data;
}

ExternalPredictions read_predictions_csv(const std::string& path, std::size_t n, std::size_t p) {
    auto lines = read_lines(path);
    if (lines.empty()) throw IoError(path + ": empty predictions file");

    std::vector<std::string> want{"yhat"};
    for (std::size_t j = 0; j < p; ++j) want.push_back("g" + std::to_string(j + 1));
    expect_header(split(lines[0]), want, path);
    if (lines.size() - 1 != n)
        throw IoError(path + ": expected " + std::to_string(n) + " prediction rows, got " +
                      std::to_string(lines.size() - 1));

    ExternalPredictions preds;
    preds.yhat.resize(n);
    preds.gradients = Matrix(n, p);
    for (std::size_t i = 0; i < n; ++i) {
        auto tokens = split(lines[i + 1]);
        if (tokens.size() != p + 1)
            throw IoError(path + ":" + std::to_string(i + 2) + ": expected " +
                          std::to_string(p + 1) + " columns");
        preds.yhat[i] = parse_double(tokens[0], path, i + 2);
        for (std::size_t j = 0; j < p; ++j)
            preds.gradients(i, j) = parse_double(tokens[j + 1], path, i + 2);
    }
    return preds;
}

void write_predictions_csv(const ExternalPredictions& preds, const std::string& path) {
    auto out = open_out(path);
    out << "yhat";
    for (std::size_t j = 0; j < preds.gradients.cols(); ++j) out << ",g" << (j + 1);
    out << "\n";
    for (std::size_t i = 0; i < preds.yhat.size(); ++i) {
        out << fmt(preds.yhat[i]);
        for (std::size_t j = 0; j < preds.gradients.cols(); ++j)
            out << ',' << fmt(preds.gradients(i, j));
        out << "\n";
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_curve_csv(const ImportanceCurve& curve, const std::string& path) {
    auto out = open_out(path);
    out << "tau,q_hat,f_y_at_q";
    for (std::size_t j = 0; j < curve.p(); ++j) out << ",beta_" << (j + 1);
    out << "\n";
    for (std::size_t k = 0; k < curve.k(); ++k) {
        out << fmt(curve.taus[k]) << ',' << fmt(curve.q_hat[k]) << ',' << fmt(curve.f_y_at_q[k]);
        for (std::size_t j = 0; j < curve.p(); ++j) out << ',' << fmt(curve.beta(k, j));
        out << "\n";
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

ImportanceCurve read_curve_csv(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.size() < 2) throw IoError(path + ": curve needs a header and at least one row");
    auto header = split(lines[0]);
    if (header.size() < 4 || header[0] != "tau" || header[1] != "q_hat" ||
        header[2] != "f_y_at_q")
        throw IoError(path + ": curve header must be 'tau,q_hat,f_y_at_q,beta_1,...'");
    const std::size_t p = header.size() - 3;

    ImportanceCurve curve;
    const std::size_t k = lines.size() - 1;
    curve.beta = Matrix(k, p);
    for (std::size_t r = 0; r < k; ++r) {
        auto tokens = split(lines[r + 1]);
        if (tokens.size() != p + 3)
            throw IoError(path + ":" + std::to_string(r + 2) + ": wrong column count");
        curve.taus.push_back(parse_double(tokens[0], path, r + 2));
        curve.q_hat.push_back(parse_double(tokens[1], path, r + 2));
        curve.f_y_at_q.push_back(parse_double(tokens[2], path, r + 2));
        for (std::size_t j = 0; j < p; ++j)
            curve.beta(r, j) = parse_double(tokens[j + 3], path, r + 2);
    }
    curve.kept_set.resize(p);
    for (std::size_t j = 0; j < p; ++j) curve.kept_set[j] = j;
    return curve;
}

void write_summary_csv(const ReplicationSummary& summary, const std::string& path) {
    auto out = open_out(path);
    out << "tau";
    for (std::size_t j = 0; j < summary.p; ++j)
        out << ",mean_beta" << (j + 1) << ",sd_beta" << (j + 1);
    out << ",prun,gof_pass_rate,reps_completed,reps_failed\n";
    for (std::size_t k = 0; k < summary.taus.size(); ++k) {
        out << fmt(summary.taus[k]);
        for (std::size_t j = 0; j < summary.p; ++j)
            out << ',' << fmt(summary.mean_beta(k, j)) << ',' << fmt(summary.sd_beta(k, j));
        out << ',' << fmt(summary.prun[k]) << ',' << fmt(summary.gof_pass_rate[k]) << ','
            << summary.reps_completed << ',' << summary.failures.size() << "\n";
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

ReplicationSummary read_summary_csv(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.size() < 2) throw IoError(path + ": summary needs a header and at least one row");
    auto header = split(lines[0]);
    if (header.size() < 7 || (header.size() - 5) % 2 != 0)
        throw IoError(path + ": malformed summary header");
    const std::size_t p = (header.size() - 5) / 2;

    ReplicationSummary summary;
    summary.p = p;
    const std::size_t k = lines.size() - 1;
    summary.mean_beta = Matrix(k, p);
    summary.sd_beta = Matrix(k, p);
    std::size_t failed = 0;
    for (std::size_t r = 0; r < k; ++r) {
        auto tokens = split(lines[r + 1]);
        if (tokens.size() != header.size())
            throw IoError(path + ":" + std::to_string(r + 2) + ": wrong column count");
        std::size_t c = 0;
        summary.taus.push_back(parse_double(tokens[c++], path, r + 2));
        for (std::size_t j = 0; j < p; ++j) {
            summary.mean_beta(r, j) = parse_double(tokens[c++], path, r + 2);
            summary.sd_beta(r, j) = parse_double(tokens[c++], path, r + 2);
        }
        summary.prun.push_back(parse_double(tokens[c++], path, r + 2));
        summary.gof_pass_rate.push_back(parse_double(tokens[c++], path, r + 2));
        summary.reps_completed = parse_count(tokens[c++], path, r + 2);
        failed = parse_count(tokens[c++], path, r + 2);
    }
    summary.reps_requested = summary.reps_completed + failed;
    summary.failures.resize(failed); // messages are not round-tripped, only the count
    return summary;
}

void write_oor_csv(const OorCurve& curve, const std::string& path) {
    auto out = open_out(path);
    out << "tau,fraction\n";
    for (std::size_t i = 0; i < curve.taus.size(); ++i)
        out << fmt(curve.taus[i]) << ',' << fmt(curve.fractions[i]) << "\n";
    if (!out) throw IoError("failed while writing '" + path + "'");
}

OorCurve read_oor_csv(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty()) throw IoError(path + ": empty file");
    expect_header(split(lines[0]), {"tau", "fraction"}, path);
    OorCurve curve;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto tokens = split(lines[i]);
        if (tokens.size() != 2) throw IoError(path + ":" + std::to_string(i + 1) + ": want 2 columns");
        curve.taus.push_back(parse_double(tokens[0], path, i + 1));
        curve.fractions.push_back(parse_double(tokens[1], path, i + 1));
    }
    return curve;
}

void write_pruning_csv(const PruningReport& report, std::size_t p, const std::string& path) {
    auto out = open_out(path);
    out << "feature";
    for (const auto& rec : report.per_tau) out << ",tau_" << fmt(rec.tau);
    out << ",final\n";
    for (std::size_t j = 0; j < p; ++j) {
        out << 'x' << (j + 1);
        for (const auto& rec : report.per_tau) {
            bool dropped = std::find(rec.dropped.begin(), rec.dropped.end(), j) != rec.dropped.end();
            out << ',' << (dropped ? "dropped" : "kept");
        }
        bool final_dropped =
            std::find(report.dropped.begin(), report.dropped.end(), j) != report.dropped.end();
        out << ',' << (final_dropped ? "dropped" : "kept") << "\n";
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

} // namespace uqfi
