#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "covel/errors.hpp"
#include "covel/variational.hpp"

namespace covel {

// Insertion-ordered JSON value with a fixed float rendering (17 significant
// digits via %.17g), so identical runs serialize byte-identically.
class Json {
public:
    enum class Kind { Null, Bool, Int, Double, String, Array, Object };

    Json() : kind_(Kind::Null) {}
    static Json boolean(bool v);
    static Json integer(long long v);
    static Json number(double v);
    static Json string(std::string v);
    static Json array();
    static Json object();

    Kind kind() const { return kind_; }

    void push(Json v);                          // Array
    void add(const std::string& key, Json v);   // Object

    std::string dump() const;    // compact
    std::string pretty() const;  // 2-space indentation

private:
    void write(std::string& out, int indent, bool prettyMode) const;

    Kind kind_;
    bool b_ = false;
    long long i_ = 0;
    double d_ = 0.0;
    std::string s_;
    std::vector<Json> items_;
    std::vector<std::pair<std::string, Json>> members_;
};

// CSV with header "t,q1..qn,qd1..qdn", '.' decimal, newline-terminated rows.
std::string trajectoryCsv(const std::vector<TrajectorySample>& trajectory, int dim);

void writeFile(const std::string& path, const std::string& content);

} // namespace covel
