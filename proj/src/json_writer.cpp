#include "topical/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace topical {

std::string format_double_17(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";  // should not be emitted
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
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
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

Json Json::object() {
    Json j;
    j.kind_ = Kind::Object;
    return j;
}

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

Json Json::str(std::string s) {
    Json j;
    j.kind_ = Kind::String;
    j.string_ = std::move(s);
    return j;
}

Json Json::number_vec(const std::vector<double>& v) {
    Json j = array();
    for (double x : v) j.push(number(x));
    return j;
}

Json Json::int_vec(const std::vector<int>& v) {
    Json j = array();
    for (int x : v) j.push(integer(x));
    return j;
}

Json& Json::set(const std::string& key, Json v) {
    if (kind_ != Kind::Object) throw std::logic_error("set on non-object json");
    fields_.emplace_back(key, std::move(v));
    return *this;
}

Json& Json::push(Json v) {
    if (kind_ != Kind::Array) throw std::logic_error("push on non-array json");
    items_.push_back(std::move(v));
    return *this;
}

void Json::dump_to(std::string& out) const {
    switch (kind_) {
        case Kind::Object: {
            out += '{';
            for (size_t i = 0; i < fields_.size(); ++i) {
                if (i) out += ',';
                out += '"';
                out += json_escape(fields_[i].first);
                out += "\":";
                fields_[i].second.dump_to(out);
            }
            out += '}';
            return;
        }
        case Kind::Array: {
            out += '[';
            for (size_t i = 0; i < items_.size(); ++i) {
                if (i) out += ',';
                items_[i].dump_to(out);
            }
            out += ']';
            return;
        }
        case Kind::Number: out += format_double_17(num_); return;
        case Kind::Integer: out += std::to_string(int_); return;
        case Kind::Bool: out += bool_ ? "true" : "false"; return;
        case Kind::String:
            out += '"';
            out += json_escape(string_);
            out += '"';
            return;
    }
}

std::string Json::dump() const {
    std::string out;
    dump_to(out);
    return out;
}

}  // namespace topical
