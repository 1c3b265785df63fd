#include "stab/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace stab {

std::string fmt17(double x) {
    if (std::isnan(x)) return "\"nan\"";
    if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

Json Json::object() { return Json{}; }

Json Json::array() {
    Json j;
    j.kind_ = Kind::Array;
    return j;
}

Json Json::number(double v) {
    Json j;
    j.kind_ = Kind::Number;
    j.num_ = v;
    return j;
}

Json Json::integer(long long v) {
    Json j;
    j.kind_ = Kind::Integer;
    j.int_ = v;
    return j;
}

Json Json::boolean(bool v) {
    Json j;
    j.kind_ = Kind::Bool;
    j.bool_ = v;
    return j;
}

Json Json::string(std::string v) {
    Json j;
    j.kind_ = Kind::String;
    j.str_ = std::move(v);
    return j;
}

Json& Json::set(const std::string& key, Json v) {
    members_.emplace_back(key, std::move(v));
    return *this;
}
Json& Json::set(const std::string& key, double v) { return set(key, number(v)); }
Json& Json::set(const std::string& key, const std::string& v) {
    return set(key, string(v));
}
Json& Json::set(const std::string& key, const char* v) {
    return set(key, string(v));
}
Json& Json::set(const std::string& key, bool v) { return set(key, boolean(v)); }
Json& Json::set_int(const std::string& key, long long v) {
    return set(key, integer(v));
}

Json& Json::push(Json v) {
    items_.push_back(std::move(v));
    return *this;
}

namespace {

void escape_into(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
}

}  // namespace

void Json::write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (kind_) {
        case Kind::Number: out += fmt17(num_); break;
        case Kind::Integer: out += std::to_string(int_); break;
        case Kind::Bool: out += bool_ ? "true" : "false"; break;
        case Kind::String: escape_into(out, str_); break;
        case Kind::Object: {
            if (members_.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            for (std::size_t i = 0; i < members_.size(); ++i) {
                out += pad_in;
                escape_into(out, members_[i].first);
                out += ": ";
                members_[i].second.write(out, indent, depth + 1);
                if (i + 1 < members_.size()) out += ',';
                out += '\n';
            }
            out += pad + "}";
            break;
        }
        case Kind::Array: {
            if (items_.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < items_.size(); ++i) {
                out += pad_in;
                items_[i].write(out, indent, depth + 1);
                if (i + 1 < items_.size()) out += ',';
                out += '\n';
            }
            out += pad + "]";
            break;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

Json report_to_json(const InequalityReport& rep) {
    Json j = Json::object();
    j.set("name", rep.name);
    j.set("lhs", rep.lhs);
    j.set("rhs", rep.rhs);
    j.set("slack", rep.slack);
    j.set("normalized_slack", rep.normalized_slack());
    Json terms = Json::object();
    for (const auto& [k, v] : rep.terms) terms.set(k, v);
    j.set("terms", std::move(terms));
    Json params = Json::object();
    for (const auto& [k, v] : rep.params) params.set(k, v);
    j.set("params", std::move(params));
    Json flags = Json::array();
    for (const auto& f : rep.flags) flags.push(Json::string(f));
    j.set("flags", std::move(flags));
    return j;
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("write_file: cannot open " + path);
    out << content;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += header[i];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_)
        throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buf_ += ',';
        char b[40];
        std::snprintf(b, sizeof(b), "%.17g", values[i]);
        buf_ += b;
    }
    buf_ += '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += cells[i];
    }
    buf_ += '\n';
}

void CsvWriter::save(const std::string& path) const { write_file(path, buf_); }

}  // namespace stab
