// k3lat command-line interface.
//
// Every subcommand wraps one library operation family, reads JSON files
// or inline flags, and prints either human-readable text or JSON
// (--json).  Rationals are printed as "p/q".  Exit codes: 0 success,
// 1 input error, 2 a validation check reported a failure, 64 usage.

#include "k3lat/k3lat.hpp"
#include "k3lat/io_json.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace k3lat;

namespace {

int g_exit = 0;

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (const auto& t : split_list(s)) out.push_back(static_cast<int>(parse_int(t)));
    return out;
}

std::vector<int64_t> parse_prime_list(const std::string& s) {
    std::vector<int64_t> out;
    for (const auto& t : split_list(s)) out.push_back(static_cast<int64_t>(parse_int(t)));
    return out;
}

std::vector<Rat> parse_rat_list(const std::string& s) {
    std::vector<Rat> out;
    for (const auto& t : split_list(s)) out.push_back(parse_rat(t));
    return out;
}

// "5:3,7:4" -> residue system
ResidueSystem parse_residues(const std::string& s) {
    std::vector<ResidueEntry> entries;
    for (const auto& t : split_list(s)) {
        auto colon = t.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("residues must look like prime:residue, got " + t);
        entries.push_back({parse_int(t.substr(0, colon)), parse_int(t.substr(colon + 1))});
    }
    return ResidueSystem(entries);
}

SectionContact parse_contacts(const std::vector<FiberInstance>& fibers, const std::string& s, int e) {
    auto toks = split_list(s);
    if (toks.size() != fibers.size())
        throw std::invalid_argument("contact list length does not match fiber count");
    SectionContact out;
    out.e = e;
    for (size_t i = 0; i < fibers.size(); ++i) out.contacts.push_back(parse_label(fibers[i], toks[i]));
    return out;
}

void emit(const Json& j, bool as_json, const std::string& human) {
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << human << "\n";
}

struct SurfaceArgs {
    std::string config_path;
    std::string fibers;
    int chi = 2;
    int torsion = 1;

    SurfaceConfigFile load() const {
        if (!config_path.empty()) return surface_config_from_json(load_json_file(config_path));
        if (fibers.empty()) throw std::invalid_argument("need --config or --fibers");
        SurfaceConfigFile f;
        f.cfg.chi = chi;
        f.cfg.fibers = parse_fibers(fibers);
        f.cfg.torsion_order = torsion;
        validate_config(f.cfg);
        return f;
    }
};

void add_surface_flags(CLI::App* cmd, SurfaceArgs& args) {
    cmd->add_option("--config", args.config_path, "surface configuration JSON file");
    cmd->add_option("--fibers", args.fibers, "fiber list, e.g. I0*,I0*,I6,I3,I2,I1 or A7+8A1");
    cmd->add_option("--chi", args.chi, "holomorphic Euler characteristic (default 2)");
    cmd->add_option("--torsion", args.torsion, "torsion order (default 1)");
}

std::string pattern_str(const std::vector<FiberInstance>& fibers, const SectionContact& s) {
    std::string out;
    for (size_t i = 0; i < fibers.size(); ++i) {
        if (i) out += ",";
        out += label_str(fibers[i], s.contacts[i]);
    }
    return out + " e=" + std::to_string(s.e);
}

GramLattice lattice_by_name(const std::string& name) {
    if (name == "U") return lattice_U();
    if (name.size() >= 2 && name.front() == '<' && name.back() == '>')
        return lattice_diag({parse_rat(name.substr(1, name.size() - 2))});
    if (name.rfind("diag:", 0) == 0) {
        std::vector<Rat> d = parse_rat_list(name.substr(5));
        return lattice_diag(d);
    }
    if (name.size() >= 2 && (name[0] == 'A' || name[0] == 'D' || name[0] == 'E')) {
        int n = static_cast<int>(parse_int(name.substr(1)));
        if (name[0] == 'A') return lattice_A(n);
        if (name[0] == 'D') return lattice_D(n);
        return lattice_E(n);
    }
    throw std::invalid_argument("unknown lattice name: " + name +
                                " (use U, An, Dn, E6/E7/E8, <n>, diag:a,b,c)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k3lat: exact lattice arithmetic for elliptic surfaces, K3 correspondences,\n"
                 "and mod-p singular point hunting"};
    app.require_subcommand(1);
    bool as_json = false;

    // ---- height ----------------------------------------------------------
    auto* c_height = app.add_subcommand("height", "height of a section from its contact pattern");
    {
        static SurfaceArgs args;
        static std::string contacts;
        static int e = 0;
        static int section_idx = -1;
        add_surface_flags(c_height, args);
        c_height->add_option("--contacts", contacts, "per-fiber components, e.g. near,near,2,0,0,0");
        c_height->add_option("--e", e, "intersection with the zero section (default 0)");
        c_height->add_option("--section", section_idx, "index of a section stored in the config file");
        c_height->add_flag("--json", as_json, "JSON output");
        c_height->callback([&]() {
            auto f = args.load();
            SectionContact s;
            if (section_idx >= 0) {
                if (section_idx >= static_cast<int>(f.cfg.sections.size()))
                    throw std::invalid_argument("section index out of range");
                s = f.cfg.sections[section_idx];
            } else if (!contacts.empty()) {
                s = parse_contacts(f.cfg.fibers, contacts, e);
            } else {
                throw std::invalid_argument("need --contacts or --section");
            }
            Rat h = height(f.cfg, s);
            emit(Json{{"height", rat_str(h)}}, as_json, rat_str(h));
        });
    }

    // ---- pairing ---------------------------------------------------------
    auto* c_pairing = app.add_subcommand("pairing", "height pairing of two sections");
    {
        static SurfaceArgs args;
        static std::string contacts_s, contacts_t;
        static int e_s = 0, e_t = 0, st = 0;
        static int idx_s = -1, idx_t = -1;
        add_surface_flags(c_pairing, args);
        c_pairing->add_option("--s-contacts", contacts_s, "contacts of the first section");
        c_pairing->add_option("--t-contacts", contacts_t, "contacts of the second section");
        c_pairing->add_option("--s-e", e_s, "first section . zero section");
        c_pairing->add_option("--t-e", e_t, "second section . zero section");
        c_pairing->add_option("--st", st, "intersection number of the two sections");
        c_pairing->add_option("--s", idx_s, "index of the first section in the config file");
        c_pairing->add_option("--t", idx_t, "index of the second section in the config file");
        c_pairing->add_flag("--json", as_json, "JSON output");
        c_pairing->callback([&]() {
            auto f = args.load();
            auto pick = [&](int idx, const std::string& contacts, int e) {
                if (idx >= 0) {
                    if (idx >= static_cast<int>(f.cfg.sections.size()))
                        throw std::invalid_argument("section index out of range");
                    return f.cfg.sections[idx];
                }
                if (contacts.empty()) throw std::invalid_argument("need contacts or section index");
                return parse_contacts(f.cfg.fibers, contacts, e);
            };
            SectionContact s = pick(idx_s, contacts_s, e_s);
            SectionContact t = pick(idx_t, contacts_t, e_t);
            Rat v = pairing(f.cfg, s, t, st);
            emit(Json{{"pairing", rat_str(v)}}, as_json, rat_str(v));
        });
    }

    // ---- nsdet -----------------------------------------------------------
    auto* c_nsdet = app.add_subcommand("nsdet", "Neron-Severi determinant from the Shioda-Tate formula");
    {
        static SurfaceArgs args;
        static bool symbolic = false;
        add_surface_flags(c_nsdet, args);
        c_nsdet->add_flag("--symbolic", symbolic, "print disc as multiple of the rank-1 generator height");
        c_nsdet->add_flag("--json", as_json, "JSON output");
        c_nsdet->callback([&]() {
            auto f = args.load();
            if (symbolic) {
                Rat coeff = ns_det_coefficient(f.cfg.fibers, f.cfg.torsion_order);
                emit(Json{{"coefficient", rat_str(coeff)}, {"relation", rat_str(coeff) + " * h"}},
                     as_json, "disc = " + rat_str(coeff) + " * h");
                return;
            }
            RatMatrix mw = f.mw_gram ? *f.mw_gram : RatMatrix{};
            Rat d = ns_determinant(f.cfg, mw);
            emit(Json{{"det", rat_str(d)}, {"abs", rat_str(boost::multiprecision::abs(d))}}, as_json,
                 rat_str(d));
        });
    }

    // ---- solve-contacts ---------------------------------------------------
    auto* c_solve = app.add_subcommand("solve-contacts", "contact patterns with a prescribed height");
    {
        static SurfaceArgs args;
        static std::string target;
        static int e_max = 3;
        static bool all = false;
        add_surface_flags(c_solve, args);
        c_solve->add_option("--target", target, "target height, e.g. 1/8")->required();
        c_solve->add_option("--emax", e_max, "bound on section . zero-section (default 3)");
        c_solve->add_flag("--all", all, "list all patterns instead of symmetry classes");
        c_solve->add_flag("--json", as_json, "JSON output");
        c_solve->callback([&]() {
            auto f = args.load();
            auto pats = solve_contacts(f.cfg.chi, f.cfg.fibers, parse_rat(target), e_max, !all);
            Json out = Json::array();
            std::string human;
            for (const auto& p : pats) {
                out.push_back(section_to_json(f.cfg.fibers, p));
                human += pattern_str(f.cfg.fibers, p) + "\n";
            }
            human += std::to_string(pats.size()) + (all ? " patterns" : " pattern classes");
            emit(Json{{"count", pats.size()}, {"patterns", out}}, as_json, human);
        });
    }

    // ---- torsion -----------------------------------------------------------
    auto* c_torsion = app.add_subcommand("torsion", "height-0 contact patterns (torsion candidates)");
    {
        static SurfaceArgs args;
        static std::string group;
        add_surface_flags(c_torsion, args);
        c_torsion->add_option("--group", group, "invariant factors, e.g. 2,2: list valid assignments");
        c_torsion->add_flag("--json", as_json, "JSON output");
        c_torsion->callback([&]() {
            auto f = args.load();
            if (group.empty()) {
                auto cands = torsion_candidates(f.cfg.chi, f.cfg.fibers);
                Json out = Json::array();
                std::string human;
                for (const auto& p : cands) {
                    out.push_back(section_to_json(f.cfg.fibers, p));
                    human += pattern_str(f.cfg.fibers, p) + "\n";
                }
                human += std::to_string(cands.size()) + " candidates";
                emit(Json{{"count", cands.size()}, {"candidates", out}}, as_json, human);
                return;
            }
            auto groups = torsion_groups(f.cfg.chi, f.cfg.fibers, parse_int_list(group));
            Json out = Json::array();
            std::string human;
            for (const auto& g : groups) {
                Json gj = Json::array();
                std::string line = "{ ";
                for (const auto& t : g) {
                    gj.push_back(section_to_json(f.cfg.fibers, t));
                    line += pattern_str(f.cfg.fibers, t) + " ; ";
                }
                out.push_back(gj);
                human += line + "}\n";
            }
            human += std::to_string(groups.size()) + " assignments";
            emit(Json{{"count", groups.size()}, {"groups", out}}, as_json, human);
        });
    }

    // ---- exclude-disc -------------------------------------------------------
    auto* c_excl = app.add_subcommand("exclude-disc",
                                      "feasibility of candidate Picard discriminants for a rank-1 frame");
    {
        static std::string frame, torsion, candidates;
        static int chi = 2, rank = 1, e_max = 3;
        c_excl->add_option("--frame", frame, "reducible fibers, e.g. A7+8A1")->required();
        c_excl->add_option("--rank", rank, "Mordell-Weil rank (must be 1)");
        c_excl->add_option("--torsion", torsion, "torsion invariant factors, e.g. 2,2")->required();
        c_excl->add_option("--candidates", candidates, "candidate discriminants")->required();
        c_excl->add_option("--chi", chi, "holomorphic Euler characteristic (default 2)");
        c_excl->add_option("--emax", e_max, "bound on section . zero-section (default 3)");
        c_excl->add_flag("--json", as_json, "JSON output");
        c_excl->callback([&]() {
            if (rank != 1) throw std::invalid_argument("only rank-1 frames are supported");
            auto fibers = parse_fibers(frame);
            auto reports = exclude_discriminant(chi, fibers, parse_int_list(torsion),
                                                parse_rat_list(candidates), e_max);
            Json out = Json::array();
            std::string human;
            for (const auto& r : reports) {
                Json pc = Json::array();
                for (const auto& p : r.pattern_classes) pc.push_back(section_to_json(fibers, p));
                out.push_back(Json{{"candidate", rat_str(r.candidate_disc)},
                                   {"height", rat_str(r.required_height)},
                                   {"feasible", r.feasible},
                                   {"pattern_classes", pc},
                                   {"certificate", r.certificate}});
                human += rat_str(r.candidate_disc) + ": " + (r.feasible ? "feasible" : "infeasible") +
                         " (h=" + rat_str(r.required_height) + ", " +
                         std::to_string(r.pattern_classes.size()) + " pattern classes) — " +
                         r.certificate + "\n";
            }
            if (!human.empty()) human.pop_back();
            emit(out, as_json, human);
        });
    }

    // ---- euler ---------------------------------------------------------------
    auto* c_euler = app.add_subcommand("euler", "Euler number check for a fiber configuration");
    {
        static std::string config_path, fibers, multiple;
        static int chi = 2;
        static bool complete = false;
        c_euler->add_option("--config", config_path, "fibration JSON file");
        c_euler->add_option("--fibers", fibers, "fiber list");
        c_euler->add_option("--chi", chi, "holomorphic Euler characteristic");
        c_euler->add_option("--multiple", multiple, "multiple fiber multiplicities, e.g. 2,3");
        c_euler->add_flag("--complete", complete, "fiber list is declared complete");
        c_euler->add_flag("--json", as_json, "JSON output");
        c_euler->callback([&]() {
            FibrationData fd;
            if (!config_path.empty()) {
                fd = fibration_from_json(load_json_file(config_path));
            } else {
                fd.chi = chi;
                if (!fibers.empty()) fd.fibers = parse_fibers(fibers);
                if (!multiple.empty()) fd.multiple_fibers = parse_int_list(multiple);
            }
            EulerCheck chk = euler_check(fd, complete);
            std::string human = chk.ok() ? (complete ? "ok" : "deficit " + std::to_string(chk.deficit))
                                         : "deficit " + std::to_string(chk.deficit);
            emit(Json{{"ok", chk.ok()}, {"deficit", chk.deficit}}, as_json, human);
            if (!chk.ok()) g_exit = 2;
        });
    }

    // ---- plurigenus -----------------------------------------------------------
    auto* c_pluri = app.add_subcommand("plurigenus", "dimensions h^0(nK) of pluricanonical systems");
    {
        static std::string config_path, multiple, nspec = "1";
        static std::string fibers;
        static int chi = 1;
        c_pluri->add_option("--config", config_path, "fibration JSON file");
        c_pluri->add_option("--chi", chi, "holomorphic Euler characteristic");
        c_pluri->add_option("--fibers", fibers, "fiber list (optional)");
        c_pluri->add_option("--multiple", multiple, "multiple fiber multiplicities, e.g. 2,3");
        c_pluri->add_option("--n", nspec, "n or range, e.g. 3 or 1..6");
        c_pluri->add_flag("--json", as_json, "JSON output");
        c_pluri->callback([&]() {
            FibrationData fd;
            if (!config_path.empty()) {
                fd = fibration_from_json(load_json_file(config_path));
            } else {
                fd.chi = chi;
                if (!fibers.empty()) fd.fibers = parse_fibers(fibers);
                if (!multiple.empty()) fd.multiple_fibers = parse_int_list(multiple);
            }
            int lo, hi;
            auto dots = nspec.find("..");
            if (dots == std::string::npos) {
                lo = hi = static_cast<int>(parse_int(nspec));
            } else {
                lo = static_cast<int>(parse_int(nspec.substr(0, dots)));
                hi = static_cast<int>(parse_int(nspec.substr(dots + 2)));
            }
            if (lo > hi || lo < 1) throw std::invalid_argument("bad n range");
            Json vals = Json::array();
            std::string human;
            for (int n = lo; n <= hi; ++n) {
                Int p = plurigenus(fd, n);
                vals.push_back(int_str(p));
                if (!human.empty()) human += " ";
                human += int_str(p);
            }
            emit(Json{{"n_from", lo}, {"n_to", hi}, {"values", vals}}, as_json, human);
        });
    }

    // ---- kodaira-dim ------------------------------------------------------------
    auto* c_kd = app.add_subcommand("kodaira-dim", "Kodaira dimension of a genus-1 fibration");
    {
        static std::string config_path, multiple, fibers;
        static int chi = 2;
        c_kd->add_option("--config", config_path, "fibration JSON file");
        c_kd->add_option("--chi", chi, "holomorphic Euler characteristic");
        c_kd->add_option("--fibers", fibers, "fiber list (optional)");
        c_kd->add_option("--multiple", multiple, "multiple fiber multiplicities");
        c_kd->add_flag("--json", as_json, "JSON output");
        c_kd->callback([&]() {
            FibrationData fd;
            if (!config_path.empty()) {
                fd = fibration_from_json(load_json_file(config_path));
            } else {
                fd.chi = chi;
                if (!fibers.empty()) fd.fibers = parse_fibers(fibers);
                if (!multiple.empty()) fd.multiple_fibers = parse_int_list(multiple);
            }
            std::string v = kodaira_dimension_str(kodaira_dimension(fd));
            emit(Json{{"kodaira_dimension", v}}, as_json, v);
        });
    }

    // ---- quotient-k2 --------------------------------------------------------------
    auto* c_qk2 = app.add_subcommand("quotient-k2", "K^2 of an involution quotient");
    {
        static int ks2 = 0;
        static bool canonical = false;
        c_qk2->add_option("--ks2", ks2, "K^2 of the covering surface")->required();
        c_qk2->add_flag("--canonical-fixed-points", canonical,
                        "fixed points are isolated, smooth, acted on by -1");
        c_qk2->add_flag("--json", as_json, "JSON output");
        c_qk2->callback([&]() {
            auto q = quotient_canonical_square(ks2, canonical);
            if (q.exact)
                emit(Json{{"kt2", *q.exact}}, as_json, std::to_string(*q.exact));
            else
                emit(Json{{"bound", q.note}}, as_json, q.note);
        });
    }

    // ---- corr-validate / corr-chain ---------------------------------------------
    auto add_chain_cmd = [&](const char* name, const char* help, bool full_report) {
        auto* cmd = app.add_subcommand(name, help);
        auto chain_path = std::make_shared<std::string>();
        cmd->add_option("--chain", *chain_path, "chain JSON file")->required();
        cmd->add_flag("--json", as_json, "JSON output");
        cmd->callback([&, chain_path, full_report]() {
            auto moves = chain_from_json(load_json_file(*chain_path));
            ChainReport rep = chain_report(moves);
            Json jm = Json::array();
            std::string human;
            for (size_t i = 0; i < moves.size(); ++i) {
                const auto& m = moves[i];
                const auto& chk = rep.per_move[i];
                jm.push_back(Json{{"kind", move_kind_str(m.kind)},
                                  {"from", m.source.name},
                                  {"to", m.target.name},
                                  {"ok", chk.ok},
                                  {"violation", chk.violation}});
                human += move_kind_str(m.kind) +
                         (m.param != 0 ? "(" + int_str(m.param) + ")" : std::string()) + " " +
                         m.source.name + " -> " + m.target.name + ": " +
                         (chk.ok ? "ok" : "VIOLATION: " + chk.violation) + "\n";
            }
            Json out{{"ok", rep.ok}, {"moves", jm}};
            if (full_report) {
                out["total_degree_class"] = int_str(rep.total_degree_class);
                out["square_class_consistent"] = rep.square_class_consistent;
                if (rep.start_class) out["start_square_class"] = square_class_str(*rep.start_class);
                if (rep.end_class) out["end_square_class"] = square_class_str(*rep.end_class);
                human += "degree class (mod squares): " + int_str(rep.total_degree_class) + "\n";
                if (rep.start_class && rep.end_class)
                    human += "square classes: " + square_class_str(*rep.start_class) + " -> " +
                             square_class_str(*rep.end_class) +
                             (rep.square_class_consistent ? "" : "  [NOT invariant]") + "\n";
            }
            human += rep.ok ? "chain ok" : "chain invalid: " + rep.first_violation;
            emit(out, as_json, human);
            if (!rep.ok || !rep.square_class_consistent) g_exit = 2;
        });
    };
    add_chain_cmd("corr-validate", "validate each move of a correspondence chain", false);
    add_chain_cmd("corr-chain", "full summary of a correspondence chain", true);

    // ---- smooth-diameter ----------------------------------------------------------
    auto* c_smooth = app.add_subcommand("smooth-diameter",
                                        "check |disc| / diameter factors over small primes");
    {
        static std::string disc;
        static long long dia = 1;
        static long long bound = 5;
        c_smooth->add_option("--disc", disc, "Picard discriminant")->required();
        c_smooth->add_option("--diameter", dia, "isogeny class diameter")->required();
        c_smooth->add_option("--smooth-bound", bound, "smoothness bound (default 5)");
        c_smooth->add_flag("--json", as_json, "JSON output");
        c_smooth->callback([&]() {
            bool ok = smooth_diameter_check(parse_rat(disc), Int(dia), Int(bound));
            emit(Json{{"consistent", ok}}, as_json, ok ? "consistent" : "inconsistent");
            if (!ok) g_exit = 2;
        });
    }

    // ---- al-matrix -------------------------------------------------------------------
    auto* c_al = app.add_subcommand("al-matrix", "Atkin-Lehner matrix on an oldform space");
    {
        static long long p = 2;
        static int w = 2, d = 0, s = 1;
        static std::string label;
        static bool check = false;
        c_al->add_option("--p", p, "norm of the prime")->required();
        c_al->add_option("--w", w, "weight (even)")->required();
        c_al->add_option("--d", d, "power of the prime raised")->required();
        c_al->add_option("--s", s, "Atkin-Lehner eigenvalue on the newform (+1/-1)");
        c_al->add_option("--label", label, "newform label (bookkeeping only)");
        c_al->add_flag("--check", check, "also verify the matrix squares to the identity");
        c_al->add_flag("--json", as_json, "JSON output");
        c_al->callback([&]() {
            OldformSpace sp{label, Int(p), w, d, s};
            RatMatrix m = al_matrix(sp);
            Json out{{"matrix", rat_matrix_to_json(m)}};
            std::string human;
            if (!oldform_norm_is_prime_power(sp)) {
                out["warning"] = "p is not a prime power";
                human += "warning: p is not a prime power\n";
            }
            for (const auto& row : m) {
                for (size_t j = 0; j < row.size(); ++j) human += (j ? " " : "") + rat_str(row[j]);
                human += "\n";
            }
            if (check) {
                bool inv = al_involution_check(sp);
                out["involution"] = inv;
                human += inv ? "involution: ok" : "involution: FAILED";
                if (!inv) g_exit = 2;
            } else {
                human.pop_back();
            }
            emit(out, as_json, human);
        });
    }

    // ---- diameter ------------------------------------------------------------------
    auto* c_dia = app.add_subcommand("diameter", "isogeny class diameter (max-min isogeny degree)");
    {
        static std::string graph_path, pair;
        c_dia->add_option("--graph", graph_path, "isogeny graph JSON file")->required();
        c_dia->add_option("--pair", pair, "report min degree for one pair, e.g. 0,2");
        c_dia->add_flag("--json", as_json, "JSON output");
        c_dia->callback([&]() {
            auto g = graph_from_json(load_json_file(graph_path));
            if (!pair.empty()) {
                auto idx = parse_int_list(pair);
                if (idx.size() != 2) throw std::invalid_argument("--pair needs two indices");
                Int d = min_isogeny_degree(g, idx[0], idx[1]);
                emit(Json{{"min_degree", int_str(d)}}, as_json, int_str(d));
                return;
            }
            Int d = diameter(g);
            emit(Json{{"diameter", int_str(d)}}, as_json, int_str(d));
        });
    }

    // ---- crt / reconstruct ------------------------------------------------------------
    auto* c_crt = app.add_subcommand("crt", "combine residues with the Chinese remainder theorem");
    {
        static std::string residues;
        c_crt->add_option("--residues", residues, "prime:residue list, e.g. 3:2,5:3")->required();
        c_crt->add_flag("--json", as_json, "JSON output");
        c_crt->callback([&]() {
            auto [mod, res] = crt_combine(parse_residues(residues));
            emit(Json{{"modulus", int_str(mod)}, {"residue", int_str(res)}}, as_json,
                 int_str(res) + " mod " + int_str(mod));
        });
    }

    auto* c_rec = app.add_subcommand("reconstruct", "rational reconstruction from residues");
    {
        static std::string residues;
        static int margin = kDefaultConfidenceMargin;
        c_rec->add_option("--residues", residues, "prime:residue list, e.g. 5:3,7:4")->required();
        c_rec->add_option("--margin", margin, "confidence margin: require norm^2 <= modulus/2^margin");
        c_rec->add_flag("--json", as_json, "JSON output");
        c_rec->callback([&]() {
            auto r = rational_reconstruct(parse_residues(residues), margin);
            if (r)
                emit(Json{{"value", rat_str(*r)}}, as_json, rat_str(*r));
            else
                emit(Json{{"value", nullptr}}, as_json, "no confident answer");
        });
    }

    // ---- hunt / count-points -------------------------------------------------------------
    auto* c_hunt = app.add_subcommand("hunt", "singular points mod p, collated and reconstructed");
    {
        static std::string scheme_path, primes, strategy = "unique";
        static int margin = kDefaultConfidenceMargin;
        static long long budget = kDefaultEnumerationBudget;
        c_hunt->add_option("--scheme", scheme_path, "projective scheme JSON file")->required();
        c_hunt->add_option("--primes", primes, "primes to reduce mod, e.g. 7,11,13")->required();
        c_hunt->add_option("--strategy", strategy, "matching strategy: unique | zeros");
        c_hunt->add_option("--margin", margin, "reconstruction confidence margin");
        c_hunt->add_option("--budget", budget, "enumeration budget (default 1e8)");
        c_hunt->add_flag("--json", as_json, "JSON output");
        c_hunt->callback([&]() {
            auto s = scheme_from_json(load_json_file(scheme_path));
            auto ps = parse_prime_list(primes);
            auto runs = parallel_map(ps, [&](int64_t p) -> SingularRun {
                return {p, singular_points(s, p, budget)};
            });
            MatchStrategy ms = strategy == "zeros" ? MatchStrategy::coordinate_zero_pattern
                                                   : MatchStrategy::unique;
            auto rep = collate_and_reconstruct(s, runs, ms, margin);
            Json jruns = Json::array();
            std::string human;
            for (const auto& [p, pts] : runs) {
                Json jp = Json::array();
                std::string line = "p=" + std::to_string(p) + ":";
                for (const auto& pt : pts) {
                    jp.push_back(mod_point_to_json(pt));
                    line += " (";
                    for (size_t i = 0; i < pt.coords.size(); ++i)
                        line += (i ? ":" : "") + std::to_string(pt.coords[i]);
                    line += ")";
                }
                jruns.push_back(Json{{"prime", p}, {"singular", jp}});
                human += line + "\n";
            }
            Json jc = Json::array();
            for (const auto& c : rep.candidates) {
                jc.push_back(rational_point_to_json(c));
                human += "candidate (";
                for (size_t i = 0; i < c.coords.size(); ++i)
                    human += (i ? ":" : "") + rat_str(c.coords[i]);
                human += ") on_scheme=" + std::string(c.on_scheme ? "yes" : "no") +
                         " singular=" + (c.singular ? "yes" : "no") +
                         " verified=" + (c.verified ? "yes" : "no") + "\n";
            }
            if (!rep.bad_primes.empty()) {
                human += "bad primes skipped:";
                for (auto p : rep.bad_primes) human += " " + std::to_string(p);
                human += "\n";
            }
            if (!rep.note.empty()) human += "note: " + rep.note + "\n";
            human += std::to_string(rep.candidates.size()) + " candidate(s)";
            emit(Json{{"runs", jruns},
                      {"candidates", jc},
                      {"bad_primes", rep.bad_primes},
                      {"missing_primes", rep.missing_primes},
                      {"note", rep.note}},
                 as_json, human);
        });
    }

    auto* c_count = app.add_subcommand("count-points", "point counts of a scheme over prime fields");
    {
        static std::string scheme_path, primes;
        static long long budget = kDefaultEnumerationBudget;
        c_count->add_option("--scheme", scheme_path, "projective scheme JSON file")->required();
        c_count->add_option("--primes", primes, "primes, e.g. 2,3,5")->required();
        c_count->add_option("--budget", budget, "enumeration budget (default 1e8)");
        c_count->add_flag("--json", as_json, "JSON output");
        c_count->callback([&]() {
            auto s = scheme_from_json(load_json_file(scheme_path));
            auto ps = parse_prime_list(primes);
            auto counts = parallel_map(ps, [&](int64_t p) -> int64_t {
                return static_cast<int64_t>(enumerate_points(s, p, budget).size());
            });
            Json out = Json::array();
            std::string human;
            for (size_t i = 0; i < ps.size(); ++i) {
                out.push_back(Json{{"prime", ps[i]}, {"count", counts[i]}});
                human += std::to_string(ps[i]) + " " + std::to_string(counts[i]) + "\n";
            }
            if (!human.empty()) human.pop_back();
            emit(out, as_json, human);
        });
    }

    // ---- lattice -----------------------------------------------------------------------
    auto* c_lat = app.add_subcommand("lattice", "Gram lattice operations");
    c_lat->require_subcommand(1);
    {
        static std::string gram_path, name;
        static std::string r = "1", x, v;
        static long long dd = 2;
        static std::string require;

        auto add_source = [&](CLI::App* sub) {
            sub->add_option("--gram", gram_path, "Gram matrix JSON file (array of arrays of \"p/q\")");
            sub->add_option("--name", name, "standard lattice: U, An, Dn, E6/E7/E8, <n>, diag:a,b,c");
            sub->add_flag("--json", as_json, "JSON output");
        };
        auto load_lattice = [&]() -> GramLattice {
            if (!gram_path.empty()) return gram_from_json(load_json_file(gram_path));
            if (!name.empty()) return lattice_by_name(name);
            throw std::invalid_argument("need --gram or --name");
        };

        auto* l_disc = c_lat->add_subcommand("disc", "determinant of the Gram matrix");
        add_source(l_disc);
        l_disc->callback([&, load_lattice]() {
            Rat d = disc(load_lattice());
            emit(Json{{"det", rat_str(d)}, {"abs", rat_str(boost::multiprecision::abs(d))}}, as_json,
                 rat_str(d));
        });

        auto* l_twist = c_lat->add_subcommand("twist", "scale the form: L(r)");
        add_source(l_twist);
        l_twist->add_option("--r", r, "scale factor")->required();
        l_twist->callback([&, load_lattice]() {
            GramLattice out = twist(load_lattice(), parse_rat(r));
            emit(Json{{"gram", rat_matrix_to_json(out.gram())}, {"det", rat_str(disc(out))}}, as_json,
                 rat_matrix_to_json(out.gram()).dump() + "\ndet " + rat_str(disc(out)));
        });

        auto* l_scale = c_lat->add_subcommand("scale", "scale the vectors: rL (gram picks up r^2)");
        add_source(l_scale);
        l_scale->add_option("--r", r, "scale factor")->required();
        l_scale->callback([&, load_lattice]() {
            GramLattice out = scale_vectors(load_lattice(), parse_rat(r));
            emit(Json{{"gram", rat_matrix_to_json(out.gram())}, {"det", rat_str(disc(out))}}, as_json,
                 rat_matrix_to_json(out.gram()).dump() + "\ndet " + rat_str(disc(out)));
        });

        auto* l_adj = c_lat->add_subcommand("adjoin", "overlattice L + Z*(v/d)");
        add_source(l_adj);
        l_adj->add_option("--v", v, "integer vector in L, e.g. 1,0")->required();
        l_adj->add_option("--d", dd, "denominator")->required();
        l_adj->add_option("--require", require, "integrality of the result: integral | even");
        l_adj->callback([&, load_lattice]() {
            std::vector<Int> vec;
            for (const auto& t : split_list(v)) vec.push_back(parse_int(t));
            OverlatticeIntegrality integ = OverlatticeIntegrality::none;
            if (require == "integral") integ = OverlatticeIntegrality::integral;
            else if (require == "even") integ = OverlatticeIntegrality::even;
            else if (!require.empty()) throw std::invalid_argument("--require must be integral or even");
            GramLattice out = adjoin_fraction(load_lattice(), vec, Int(dd), integ);
            emit(Json{{"gram", rat_matrix_to_json(out.gram())}, {"det", rat_str(disc(out))}}, as_json,
                 rat_matrix_to_json(out.gram()).dump() + "\ndet " + rat_str(disc(out)));
        });

        auto* l_sq = c_lat->add_subcommand("square-class", "sign and squarefree part of a rational");
        l_sq->add_option("--x", x, "nonzero rational")->required();
        l_sq->add_flag("--json", as_json, "JSON output");
        l_sq->callback([&]() {
            SquareClass c = square_class(parse_rat(x));
            emit(Json{{"sign", c.sign}, {"squarefree", int_str(c.squarefree)}}, as_json,
                 square_class_str(c));
        });

        auto* l_conic = c_lat->add_subcommand("conic", "places where the rank-3 conic has no point");
        add_source(l_conic);
        l_conic->callback([&, load_lattice]() {
            auto places = conic_invariant(load_lattice());
            Json arr = Json::array();
            std::string human;
            for (const auto& p : places) {
                arr.push_back(place_str(p));
                human += (human.empty() ? "" : " ") + place_str(p);
            }
            if (places.empty()) human = "(none)";
            emit(Json{{"places", arr}}, as_json, human);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::RequiredError& e) {
        app.exit(e);
        return 64;
    } catch (const CLI::ExtrasError& e) {
        app.exit(e);
        return 64;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return g_exit;
}
