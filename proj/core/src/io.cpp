// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#include "revemb/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace revemb {

namespace {

bool is_skippable(const std::string &line) {
    const auto first = line.find_first_not_of(" \t\r");
    return first == std::string::npos || line[first] == '#';
}

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_number(std::string_view token, int line, int column) {
    token = trimmed(token);
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() ||
        token.empty()) {
        std::ostringstream msg;
        msg << "line " << line << ", column " << column
            << ": expected a number, got \"" << std::string(token) << "\"";
        throw ParseError(msg.str(), line, column);
    }
    return value;
}

Matrix rows_to_matrix(const std::vector<std::vector<double>> &rows) {
    const int n = static_cast<int>(rows.size());
    if (n == 0) {
        throw ParseError("no matrix rows found");
    }
    for (const auto &row : rows) {
        if (static_cast<int>(row.size()) != n) {
            std::ostringstream msg;
            msg << "matrix is not square: " << n << " rows but a row of "
                << row.size() << " values";
            throw NotSquareError(msg.str());
        }
    }
    Matrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

std::ifstream open_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open file: " + path);
    }
    return in;
}

} // namespace

Matrix parse_matrix_csv(std::istream &in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_number = 0;
    std::size_t expected_cols = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (is_skippable(line)) {
            continue;
        }
        std::vector<double> row;
        std::size_t start = 0;
        int column = 1;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            const std::string_view token =
                std::string_view(line).substr(start, comma - start);
            row.push_back(parse_number(token, line_number, column));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
            ++column;
        }
        if (!rows.empty() && row.size() != expected_cols) {
            std::ostringstream msg;
            msg << "line " << line_number << ": expected " << expected_cols
                << " values, got " << row.size();
            throw ParseError(msg.str(), line_number,
                             static_cast<int>(row.size()));
        }
        expected_cols = row.size();
        rows.push_back(std::move(row));
    }
    return rows_to_matrix(rows);
}

Matrix parse_matrix_json(std::istream &in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("matrix")) {
        throw ParseError("JSON matrix file must be an object with a "
                         "\"matrix\" key");
    }
    const auto &array = doc["matrix"];
    if (!array.is_array() || array.empty()) {
        throw ParseError("\"matrix\" must be a non-empty array of rows");
    }
    std::vector<std::vector<double>> rows;
    for (const auto &json_row : array) {
        if (!json_row.is_array()) {
            throw ParseError("\"matrix\" rows must be arrays of numbers");
        }
        std::vector<double> row;
        for (const auto &v : json_row) {
            if (!v.is_number()) {
                throw ParseError("\"matrix\" entries must be numbers");
            }
            row.push_back(v.get<double>());
        }
        rows.push_back(std::move(row));
    }
    return rows_to_matrix(rows);
}

Matrix parse_matrix_file(const std::string &path,
                         std::optional<FileFormat> format) {
    auto in = open_file(path);
    if (!format) {
        const auto dot = path.find_last_of('.');
        const std::string ext =
            dot == std::string::npos ? "" : path.substr(dot + 1);
        format = ext == "json" ? FileFormat::Json : FileFormat::Csv;
    }
    return *format == FileFormat::Json ? parse_matrix_json(in)
                                       : parse_matrix_csv(in);
}

Trajectory parse_trajectory(std::istream &in, double interval,
                            std::optional<int> n_states) {
    Trajectory traj;
    traj.interval = interval;
    std::string line;
    int line_number = 0;
    int max_state = -1;
    while (std::getline(in, line)) {
        ++line_number;
        if (is_skippable(line)) {
            continue;
        }
        const std::string_view token = trimmed(line);
        int state = 0;
        const auto [ptr, ec] =
            std::from_chars(token.data(), token.data() + token.size(), state);
        if (ec != std::errc{} || ptr != token.data() + token.size() ||
            state < 0) {
            std::ostringstream msg;
            msg << "line " << line_number
                << ": expected a nonnegative state index, got \""
                << std::string(token) << "\"";
            throw ParseError(msg.str(), line_number, 1);
        }
        max_state = std::max(max_state, state);
        traj.states.push_back(state);
    }
    if (traj.states.size() < 2) {
        throw ParseError("trajectory must contain at least two states");
    }
    traj.n = n_states.value_or(max_state + 1);
    validate_trajectory(traj); // raises IndexOutOfRangeError on override
    return traj;
}

Trajectory parse_trajectory_file(const std::string &path, double interval,
                                 std::optional<int> n_states) {
    auto in = open_file(path);
    return parse_trajectory(in, interval, n_states);
}

void write_trajectory(std::ostream &out, const Trajectory &traj) {
    for (int state : traj.states) {
        out << state << '\n';
    }
}

std::string format_double(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string json_escape(const std::string &s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\t':
            out += "\\t";
            break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buffer[8];
                std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
                out += buffer;
            } else {
                out += c;
            }
        }
    }
    return out;
}

namespace {

// Minimal JSON writer so every number is emitted via format_double.
struct JsonWriter {
    std::ostringstream out;
    bool first_field = true;

    void field(const std::string &name) {
        if (!first_field) {
            out << ",\n";
        }
        first_field = false;
        out << "  \"" << name << "\": ";
    }

    void number(double v) {
        if (std::isfinite(v)) {
            out << format_double(v);
        } else {
            out << "null";
        }
    }

    void vector(const Vector &v) {
        out << "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            out << (i ? ", " : "");
            number(v[i]);
        }
        out << "]";
    }

    void matrix(const Matrix &m) {
        out << "[";
        for (int i = 0; i < m.dim(); ++i) {
            out << (i ? ", [" : "[");
            for (int j = 0; j < m.dim(); ++j) {
                out << (j ? ", " : "");
                number(m(i, j));
            }
            out << "]";
        }
        out << "]";
    }

    void strings(const std::vector<std::string> &values) {
        out << "[";
        for (std::size_t i = 0; i < values.size(); ++i) {
            out << (i ? ", " : "") << "\"" << json_escape(values[i]) << "\"";
        }
        out << "]";
    }
};

std::string emit_json(const EmbeddingReport &r) {
    JsonWriter w;
    w.out << "{\n";
    w.field("n");
    w.out << r.n;
    w.field("verdict");
    w.out << "\"" << to_string(r.verdict) << "\"";
    w.field("reasons");
    w.strings(r.reasons);

    w.field("invariant_distribution");
    if (r.mu) {
        w.vector(r.mu->values());
    } else {
        w.out << "null";
    }

    w.field("eigenvalues");
    if (r.spectral) {
        w.vector(r.spectral->lambdas);
    } else {
        w.out << "null";
    }

    w.field("distinct_eigenvalues");
    if (r.spectral) {
        w.out << "[";
        for (std::size_t i = 0; i < r.spectral->gammas.size(); ++i) {
            w.out << (i ? ", " : "") << "{\"value\": "
                  << format_double(r.spectral->gammas[i])
                  << ", \"multiplicity\": " << r.spectral->multiplicities[i]
                  << "}";
        }
        w.out << "]";
    } else {
        w.out << "null";
    }

    w.field("coefficients");
    if (r.coefficients) {
        w.vector(r.coefficients->k);
    } else {
        w.out << "null";
    }

    w.field("generator");
    if (r.generator) {
        w.matrix(r.generator->matrix());
    } else {
        w.out << "null";
    }

    w.field("failing_entries");
    w.out << "[";
    for (std::size_t i = 0; i < r.failing_entries.size(); ++i) {
        const auto &e = r.failing_entries[i];
        w.out << (i ? ", " : "") << "{\"row\": " << e.row
              << ", \"col\": " << e.col
              << ", \"value\": " << format_double(e.value) << "}";
    }
    w.out << "]";

    w.field("residual_expm");
    if (r.residual_expm) {
        w.number(*r.residual_expm);
    } else {
        w.out << "null";
    }

    w.field("crosscheck_gap");
    if (r.crosscheck_gap) {
        w.number(*r.crosscheck_gap);
    } else {
        w.out << "null";
    }

    w.field("warnings");
    w.strings(r.warnings);
    w.out << "\n}\n";
    return w.out.str();
}

std::string join(const std::vector<std::string> &values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? "; " : "") + values[i];
    }
    return out;
}

std::string emit_csv(const EmbeddingReport &r) {
    std::ostringstream out;
    out << "# verdict: " << to_string(r.verdict) << "\n";
    out << "# n: " << r.n << "\n";
    if (!r.reasons.empty()) {
        out << "# reasons: " << join(r.reasons) << "\n";
    }
    auto comma_list = [](const Vector &v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += (i ? "," : "") + format_double(v[i]);
        }
        return s;
    };
    if (r.mu) {
        out << "# invariant_distribution: " << comma_list(r.mu->values())
            << "\n";
    }
    if (r.spectral) {
        out << "# eigenvalues: " << comma_list(r.spectral->lambdas) << "\n";
        out << "# distinct_eigenvalues:";
        for (std::size_t i = 0; i < r.spectral->gammas.size(); ++i) {
            out << (i ? "," : " ") << format_double(r.spectral->gammas[i])
                << " (x" << r.spectral->multiplicities[i] << ")";
        }
        out << "\n";
    }
    if (r.coefficients) {
        out << "# coefficients: " << comma_list(r.coefficients->k) << "\n";
    }
    for (const auto &e : r.failing_entries) {
        out << "# failing_entry: " << e.row << "," << e.col << ","
            << format_double(e.value) << "\n";
    }
    if (r.residual_expm) {
        out << "# residual_expm: " << format_double(*r.residual_expm) << "\n";
    }
    if (r.crosscheck_gap) {
        out << "# crosscheck_gap: " << format_double(*r.crosscheck_gap)
            << "\n";
    }
    for (const auto &warning : r.warnings) {
        out << "# warning: " << warning << "\n";
    }
    if (r.generator) {
        const Matrix &g = r.generator->matrix();
        for (int i = 0; i < g.dim(); ++i) {
            for (int j = 0; j < g.dim(); ++j) {
                out << (j ? "," : "") << format_double(g(i, j));
            }
            out << "\n";
        }
    }
    return out.str();
}

} // namespace

std::string emit_report(const EmbeddingReport &report, FileFormat format) {
    return format == FileFormat::Json ? emit_json(report) : emit_csv(report);
}

int exit_code(const EmbeddingReport &report) {
    return report.verdict == Verdict::Embeddable ? 0 : 1;
}

} // namespace revemb
