#pragma once

// Minimal deterministic JSON emitter: insertion-ordered objects, doubles
// printed with up to 17 significant digits so values round-trip exactly
// and output is byte-identical for identical inputs.

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace topical {

class Json {
  public:
    static Json object();
    static Json array();
    static Json number(double v);
    static Json integer(long long v);
    static Json boolean(bool v);
    static Json str(std::string s);
    static Json number_vec(const std::vector<double>& v);
    static Json int_vec(const std::vector<int>& v);

    Json& set(const std::string& key, Json v);  // object only
    Json& push(Json v);                         // array only

    std::string dump() const;

  private:
    enum class Kind { Object, Array, Number, Integer, Bool, String };
    Kind kind_ = Kind::Object;
    double num_ = 0.0;
    long long int_ = 0;
    bool bool_ = false;
    std::string string_;
    std::vector<std::pair<std::string, Json>> fields_;
    std::vector<Json> items_;

    void dump_to(std::string& out) const;
};

std::string json_escape(const std::string& s);
std::string format_double_17(double v);

}  // namespace topical
