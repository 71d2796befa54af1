#include "topical/serialize.hpp"

#include <cmath>

namespace topical {

Json graph_json(const Digraph& g) {
    Json j = Json::object();
    Json verts = Json::array();
    for (int v = 0; v < g.n; ++v) {
        Json vert = Json::object();
        vert.set("id", Json::integer(v));
        vert.set("sigma", Json::int_vec(g.sigma[v]));
        verts.push(std::move(vert));
    }
    j.set("vertices", std::move(verts));
    Json edges = Json::array();
    for (auto [u, v] : g.edges()) {
        Json e = Json::array();
        e.push(Json::integer(u));
        e.push(Json::integer(v));
        edges.push(std::move(e));
    }
    j.set("edges", std::move(edges));
    return j;
}

void eigen_report_fields(Json& j, const EigenReport& rep) {
    j.set("status", Json::str(solve_status_name(rep.status)));
    j.set("eigenvalue_additive", Json::number(rep.eigenvalue_additive));
    j.set("eigenvalue_multiplicative", Json::number(std::exp(rep.eigenvalue_additive)));
    j.set("eigenvector_additive", Json::number_vec(rep.eigenvector));
    std::vector<double> mul(rep.eigenvector.size());
    for (size_t i = 0; i < mul.size(); ++i) mul[i] = std::exp(rep.eigenvector[i]);
    j.set("eigenvector_multiplicative", Json::number_vec(mul));
    j.set("residual_sup", Json::number(rep.residual_sup));
    j.set("iterations", Json::integer(rep.iterations));
    j.set("cw_lower", Json::number(rep.cw_lower));
    j.set("cw_upper", Json::number(rep.cw_upper));
}

Json eigen_report_json(const EigenReport& rep) {
    Json j = Json::object();
    eigen_report_fields(j, rep);
    return j;
}

}  // namespace topical
