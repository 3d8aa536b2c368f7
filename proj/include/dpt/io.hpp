#pragma once

// Artifact emission. CSV files open with `# key = value` metadata lines,
// then one header row, then data rows; every number is printed with %.17g so
// a reread recovers the exact double and identical runs produce identical
// bytes. JSON goes through the bundled serializer, which already prints
// shortest round-trip forms.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpt/citest.hpp"
#include "dpt/config.hpp"
#include "dpt/errors.hpp"

namespace dpt {

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : path_(path), out_(path) {
        if (!out_) throw ConfigError("cannot open " + path + " for writing");
    }

    void meta(const std::string& key, const std::string& value) {
        out_ << "# " << key << " = " << value << "\n";
    }

    void header(const std::vector<std::string>& columns) {
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
    }

    void row(std::span<const double> values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << fmt17(values[i]);
        out_ << "\n";
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

    void close() {
        out_.close();
        if (!out_) throw ConfigError("write failed for " + path_);
    }

private:
    std::string path_;
    std::ofstream out_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << text;
    out.close();
    if (!out) throw ConfigError("write failed for " + path);
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
    write_text(path, j.dump(2) + "\n");
}

// Numeric columns of a CSV file; `#` metadata lines and one optional
// non-numeric header row are skipped. All rows must have the same width.
inline std::vector<std::vector<double>> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    bool header_allowance = true;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = detail::trim(line);
        if (body.empty() || body[0] == '#') continue;
        for (char& c : body)
            if (c == ',') c = ' ';
        std::istringstream cells(body);
        std::vector<double> row;
        std::string tok;
        bool numeric = true;
        while (cells >> tok) {
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != tok.size()) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (header_allowance) {
                header_allowance = false;
                continue;
            }
            throw ConfigError(path + ":" + std::to_string(lineno) + ": non-numeric cell `" +
                              tok + "`");
        }
        header_allowance = false;
        if (!rows.empty() && row.size() != rows.front().size())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(rows.front().size()) + " columns, got " +
                              std::to_string(row.size()));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError(path + ": no data rows");
    return rows;
}

inline nlohmann::json inequality_report_json(const InequalityReport& rep) {
    nlohmann::json j;
    j["lhs"] = rep.lhs;
    j["rhs"] = rep.rhs;
    j["constant_used"] = rep.constant_used;
    j["margin"] = rep.margin;
    j["slack"] = rep.slack;
    j["holds"] = rep.holds;
    j["grid"] = rep.grid_resolution;
    j["scheme"] = rep.scheme;
    return j;
}

// Reports must never carry NaN or infinities; a non-finite number means the
// computation failed, not that the inequality did.
inline void require_finite(const nlohmann::json& j, const std::string& context) {
    if (j.is_number_float()) {
        if (!std::isfinite(j.get<double>()))
            throw NumericError("non-finite value in " + context);
        return;
    }
    if (j.is_object() || j.is_array())
        for (const auto& item : j) require_finite(item, context);
}

} // namespace dpt
