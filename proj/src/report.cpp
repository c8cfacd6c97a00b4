#include "covel/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace covel {

Json Json::boolean(bool v) {
    Json j;
    j.kind_ = Kind::Bool;
    j.b_ = v;
    return j;
}
Json Json::integer(long long v) {
    Json j;
    j.kind_ = Kind::Int;
    j.i_ = v;
    return j;
}
Json Json::number(double v) {
    if (!std::isfinite(v)) throw NumericError("Json: non-finite number");
    Json j;
    j.kind_ = Kind::Double;
    j.d_ = v;
    return j;
}
Json Json::string(std::string v) {
    Json j;
    j.kind_ = Kind::String;
    j.s_ = std::move(v);
    return j;
}
Json Json::array() {
    Json j;
    j.kind_ = Kind::Array;
    return j;
}
Json Json::object() {
    Json j;
    j.kind_ = Kind::Object;
    return j;
}

void Json::push(Json v) {
    if (kind_ != Kind::Array) throw Error("Json::push on non-array");
    items_.push_back(std::move(v));
}

void Json::add(const std::string& key, Json v) {
    if (kind_ != Kind::Object) throw Error("Json::add on non-object");
    members_.emplace_back(key, std::move(v));
}

namespace {

void escapeString(const std::string& s, std::string& out) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void indentBy(std::string& out, int n) {
    out.append(static_cast<std::size_t>(2 * n), ' ');
}

} // namespace

void Json::write(std::string& out, int indent, bool prettyMode) const {
    switch (kind_) {
        case Kind::Null: out += "null"; return;
        case Kind::Bool: out += b_ ? "true" : "false"; return;
        case Kind::Int: out += std::to_string(i_); return;
        case Kind::Double: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", d_);
            out += buf;
            return;
        }
        case Kind::String: escapeString(s_, out); return;
        case Kind::Array: {
            if (items_.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            for (std::size_t i = 0; i < items_.size(); ++i) {
                if (i) out += ',';
                if (prettyMode) {
                    out += '\n';
                    indentBy(out, indent + 1);
                }
                items_[i].write(out, indent + 1, prettyMode);
            }
            if (prettyMode) {
                out += '\n';
                indentBy(out, indent);
            }
            out += ']';
            return;
        }
        case Kind::Object: {
            if (members_.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            for (std::size_t i = 0; i < members_.size(); ++i) {
                if (i) out += ',';
                if (prettyMode) {
                    out += '\n';
                    indentBy(out, indent + 1);
                }
                escapeString(members_[i].first, out);
                out += prettyMode ? ": " : ":";
                members_[i].second.write(out, indent + 1, prettyMode);
            }
            if (prettyMode) {
                out += '\n';
                indentBy(out, indent);
            }
            out += '}';
            return;
        }
    }
}

std::string Json::dump() const {
    std::string out;
    write(out, 0, false);
    return out;
}

std::string Json::pretty() const {
    std::string out;
    write(out, 0, true);
    out += '\n';
    return out;
}

std::string trajectoryCsv(const std::vector<TrajectorySample>& trajectory, int dim) {
    std::string out = "t";
    for (int i = 1; i <= dim; ++i) out += ",q" + std::to_string(i);
    for (int i = 1; i <= dim; ++i) out += ",qd" + std::to_string(i);
    out += '\n';
    char buf[40];
    for (const auto& s : trajectory) {
        std::snprintf(buf, sizeof buf, "%.17g", s.t);
        out += buf;
        for (double q : s.q) {
            std::snprintf(buf, sizeof buf, ",%.17g", q);
            out += buf;
        }
        for (double qd : s.qdot) {
            std::snprintf(buf, sizeof buf, ",%.17g", qd);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
    if (!out) throw Error("failed writing output file: " + path);
}

} // namespace covel
