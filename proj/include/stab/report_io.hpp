#pragma once

#include <initializer_list>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "stab/indexform.hpp"

namespace stab {

/// Formats a double with 17 significant digits (round-trip exact), "C" locale.
std::string fmt17(double x);

/// Minimal ordered JSON document builder. Keys keep insertion order and all
/// numbers go through fmt17, so artifacts are byte-stable for a given input.
class Json {
public:
    static Json object();
    static Json array();
    static Json number(double v);
    static Json integer(long long v);
    static Json boolean(bool v);
    static Json string(std::string v);

    Json& set(const std::string& key, Json v);          // object
    Json& set(const std::string& key, double v);
    Json& set(const std::string& key, const std::string& v);
    Json& set(const std::string& key, const char* v);
    Json& set(const std::string& key, bool v);
    Json& set_int(const std::string& key, long long v);
    Json& push(Json v);                                  // array

    std::string dump(int indent = 2) const;

private:
    enum class Kind { Object, Array, Number, Integer, Bool, String };
    Kind kind_ = Kind::Object;
    double num_ = 0.0;
    long long int_ = 0;
    bool bool_ = false;
    std::string str_;
    std::vector<std::pair<std::string, Json>> members_;
    std::vector<Json> items_;

    void write(std::string& out, int indent, int depth) const;
};

/// Serializes an inequality report (fields name/lhs/rhs/slack/terms/params).
Json report_to_json(const InequalityReport& rep);

/// Writes text to a file with LF endings; creates parent directories.
void write_file(const std::string& path, const std::string& content);

/// CSV writer: comma separated, '.' decimal, header row, LF endings.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);
    const std::string& str() const { return buf_; }
    void save(const std::string& path) const;

private:
    std::string buf_;
    std::size_t columns_;
};

}  // namespace stab
