#pragma once

// JSON readers/writers for the file formats the CLI consumes: surface
// configurations, fibration data, projective schemes, isogeny graphs,
// correspondence chains, and Gram matrices (arrays of arrays of "p/q"
// strings).

#include "k3lat/mordell_weil.hpp"
#include "k3lat/fibration.hpp"
#include "k3lat/correspondence.hpp"
#include "k3lat/isogeny_graph.hpp"
#include "k3lat/pointhunt.hpp"

#include <json.hpp>

#include <fstream>

namespace k3lat {

using Json = nlohmann::json;

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

inline Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long long>(j.get<long long>()));
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw std::invalid_argument("expected a rational as string or integer");
}

inline RatMatrix rat_matrix_from_json(const Json& j) {
    RatMatrix m;
    for (const auto& row : j) {
        std::vector<Rat> r;
        for (const auto& x : row) r.push_back(rat_from_json(x));
        m.push_back(std::move(r));
    }
    return m;
}

inline Json rat_matrix_to_json(const RatMatrix& m) {
    Json rows = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(rat_str(x));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline GramLattice gram_from_json(const Json& j) { return GramLattice(rat_matrix_from_json(j)); }

// {"chi":2, "fibers":"I0*,I0*,I6,I3,I2,I1", "torsion":2, "mw_gram":[["2/3"]],
//  "sections":[{"contacts":["near","near","2","0","0","0"],"e":0}], ...}
struct SurfaceConfigFile {
    SurfaceConfig cfg;
    std::optional<RatMatrix> mw_gram;
};

inline SectionContact section_from_json(const std::vector<FiberInstance>& fibers, const Json& j) {
    SectionContact s;
    const Json& contacts = j.at("contacts");
    if (contacts.size() != fibers.size())
        throw std::invalid_argument("contact list length does not match fiber count");
    for (size_t i = 0; i < fibers.size(); ++i) {
        const Json& c = contacts[i];
        std::string tok = c.is_string() ? c.get<std::string>() : std::to_string(c.get<long>());
        s.contacts.push_back(parse_label(fibers[i], tok));
    }
    s.e = j.value("e", 0);
    return s;
}

inline Json section_to_json(const std::vector<FiberInstance>& fibers, const SectionContact& s) {
    Json contacts = Json::array();
    for (size_t i = 0; i < fibers.size(); ++i) contacts.push_back(label_str(fibers[i], s.contacts[i]));
    return Json{{"contacts", contacts}, {"e", s.e}};
}

inline SurfaceConfigFile surface_config_from_json(const Json& j) {
    SurfaceConfigFile out;
    out.cfg.chi = j.value("chi", 2);
    out.cfg.fibers = parse_fibers(j.at("fibers").get<std::string>());
    out.cfg.torsion_order = j.value("torsion", 1);
    if (j.contains("sections"))
        for (const auto& sj : j["sections"]) out.cfg.sections.push_back(section_from_json(out.cfg.fibers, sj));
    if (j.contains("torsion_sections")) {
        std::vector<SectionContact> ts;
        for (const auto& sj : j["torsion_sections"]) ts.push_back(section_from_json(out.cfg.fibers, sj));
        out.cfg.torsion_sections = std::move(ts);
    }
    if (j.contains("mw_gram")) out.mw_gram = rat_matrix_from_json(j["mw_gram"]);
    validate_config(out.cfg);
    return out;
}

// {"chi":1, "fibers":"I4,I1,I1", "multiple":[3,3]}
inline FibrationData fibration_from_json(const Json& j) {
    FibrationData fd;
    fd.chi = j.value("chi", 1);
    if (j.contains("fibers") && !j["fibers"].get<std::string>().empty())
        fd.fibers = parse_fibers(j["fibers"].get<std::string>());
    if (j.contains("multiple"))
        for (const auto& m : j["multiple"]) fd.multiple_fibers.push_back(m.get<int>());
    validate_fibration(fd);
    return fd;
}

// {"num_vars":3, "polys":["x0^2+x1^2-x2^2"], "dim":1}
inline ProjScheme scheme_from_json(const Json& j) {
    std::vector<std::string> polys;
    for (const auto& p : j.at("polys")) polys.push_back(p.get<std::string>());
    return make_scheme(j.at("num_vars").get<int>(), polys, j.at("dim").get<int>());
}

// {"vertices":["a1","a2"], "edges":[[0,1,2]]}
inline IsogenyClassGraph graph_from_json(const Json& j) {
    IsogenyClassGraph g;
    for (const auto& v : j.at("vertices")) g.vertices.push_back(v.get<std::string>());
    if (j.contains("edges"))
        for (const auto& e : j["edges"])
            g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), Int(e.at(2).get<long long>())});
    validate_graph(g);
    return g;
}

inline CorrNode node_from_json(const Json& j) {
    CorrNode n;
    n.name = j.at("name").get<std::string>();
    if (j.contains("rank")) n.picard_rank = j["rank"].get<int>();
    if (j.contains("disc")) n.picard_disc = rat_from_json(j["disc"]);
    if (j.contains("transcendental")) n.transcendental = gram_from_json(j["transcendental"]);
    if (j.contains("rational_sublattice_rank"))
        n.rational_sublattice_rank = j["rational_sublattice_rank"].get<int>();
    validate_node(n);
    return n;
}

// {"nodes":[...], "moves":[{"kind":"jacobian","d":2,"from":"a","to":"b"}, ...]}
inline std::vector<CorrMove> chain_from_json(const Json& j) {
    std::map<std::string, CorrNode> nodes;
    for (const auto& nj : j.at("nodes")) {
        CorrNode n = node_from_json(nj);
        if (nodes.count(n.name)) throw std::invalid_argument("duplicate node name: " + n.name);
        nodes[n.name] = n;
    }
    auto lookup = [&](const std::string& name) -> const CorrNode& {
        auto it = nodes.find(name);
        if (it == nodes.end()) throw std::invalid_argument("unknown node name: " + name);
        return it->second;
    };
    std::vector<CorrMove> moves;
    for (const auto& mj : j.at("moves")) {
        CorrMove m;
        std::string kind = mj.at("kind").get<std::string>();
        if (kind == "isogeny") {
            m.kind = MoveKind::isogeny;
            m.param = Int(mj.at("p").get<long long>());
        } else if (kind == "jacobian") {
            m.kind = MoveKind::jacobian;
            m.param = Int(mj.at("d").get<long long>());
        } else if (kind == "q_jacobian" || kind == "q-jacobian") {
            m.kind = MoveKind::q_jacobian;
        } else if (kind == "kummer_quotient" || kind == "kummer-quotient") {
            m.kind = MoveKind::kummer_quotient;
        } else if (kind == "twist_base_change" || kind == "twist-base-change") {
            m.kind = MoveKind::twist_base_change;
        } else {
            throw std::invalid_argument("unknown move kind: " + kind);
        }
        m.source = lookup(mj.at("from").get<std::string>());
        m.target = lookup(mj.at("to").get<std::string>());
        moves.push_back(std::move(m));
    }
    return moves;
}

inline Json mod_point_to_json(const ModPoint& pt) {
    Json coords = Json::array();
    for (int64_t c : pt.coords) coords.push_back(c);
    return Json{{"prime", pt.prime}, {"coords", coords}};
}

inline Json rational_point_to_json(const RationalPointCandidate& c) {
    Json coords = Json::array();
    for (const auto& x : c.coords) coords.push_back(rat_str(x));
    return Json{{"coords", coords},
                {"on_scheme", c.on_scheme},
                {"singular", c.singular},
                {"verified", c.verified},
                {"primes", c.primes_used}};
}

}  // namespace k3lat
