#include "shtukalab/job.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "shtukalab/selftest.hpp"

namespace shtukalab {

namespace {

using nlohmann::json;

[[noreturn]] void unknown_key(const std::string& key, const std::string& block) {
    fail(Errc::UnknownKey, "unexpected key '" + key + "' in block '" + block + "'");
}

[[noreturn]] void missing_key(const std::string& key, const std::string& block) {
    fail(Errc::UnknownKey, "missing key '" + key + "' in block '" + block + "'");
}

void check_keys(const json& obj, const std::string& block, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok |= it.key() == k;
        if (!ok) unknown_key(it.key(), block);
    }
}

std::uint64_t get_uint(const json& obj, const std::string& key, const std::string& block) {
    if (!obj.contains(key)) missing_key(key, block);
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) fail(Errc::SyntaxError, "key '" + key + "' in '" + block + "' must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

Code parse_element(const Fq& F, const json& v, const std::string& where) {
    try {
        if (v.is_string()) return F.parse(v.get<std::string>());
        if (v.is_number_unsigned()) return F.from_int(v.get<std::uint64_t>());
        if (v.is_array()) {
            std::vector<std::uint32_t> digits(F.degree(), 0);
            if (v.size() > F.degree()) fail(Errc::BadElement, "coefficient list longer than the field degree");
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!v[i].is_number_unsigned()) fail(Errc::BadElement, "coefficient list entries must be integers");
                digits[i] = static_cast<std::uint32_t>(v[i].get<std::uint64_t>() % F.p());
            }
            return F.encode(digits.data());
        }
    } catch (const Error& e) {
        fail(Errc::BadElement, std::string(e.what()) + " at " + where);
    }
    fail(Errc::BadElement, "element at " + where + " must be a string, integer or coefficient list");
}

std::string fmt_vec(const std::vector<std::uint64_t>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

} // namespace

Job parse_spec(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(Errc::SyntaxError, std::string("invalid job file: ") + e.what());
    }
    if (!root.is_object()) fail(Errc::SyntaxError, "job file must be a JSON object");
    check_keys(root, "job", {"field", "shtuka", "presentation", "cmd", "options"});

    Job job;
    if (root.contains("field")) {
        const json& f = root.at("field");
        check_keys(f, "field", {"p", "r", "m", "modulus"});
        std::uint32_t p = static_cast<std::uint32_t>(get_uint(f, "p", "field"));
        std::uint32_t r = static_cast<std::uint32_t>(get_uint(f, "r", "field"));
        std::uint32_t m = static_cast<std::uint32_t>(get_uint(f, "m", "field"));
        if (!f.contains("modulus")) missing_key("modulus", "field");
        const json& mod = f.at("modulus");
        if (!mod.is_array()) fail(Errc::SyntaxError, "field.modulus must be an array");
        std::vector<std::uint32_t> coeffs;
        for (const auto& c : mod) {
            if (!c.is_number_unsigned()) fail(Errc::SyntaxError, "field.modulus entries must be integers");
            coeffs.push_back(static_cast<std::uint32_t>(c.get<std::uint64_t>()));
        }
        job.field = Fq::create(p, r, m, std::move(coeffs));
    }

    if (root.contains("shtuka")) {
        if (!job.field) missing_key("field", "job");
        const json& s = root.at("shtuka");
        check_keys(s, "shtuka", {"dim", "matrix"});
        std::size_t dim = static_cast<std::size_t>(get_uint(s, "dim", "shtuka"));
        if (!s.contains("matrix")) missing_key("matrix", "shtuka");
        const json& mat = s.at("matrix");
        if (!mat.is_array() || mat.size() != dim) fail(Errc::SyntaxError, "shtuka.matrix must be a dim x dim array");
        MatK F(job.field, dim, dim);
        for (std::size_t i = 0; i < dim; ++i) {
            if (!mat[i].is_array() || mat[i].size() != dim)
                fail(Errc::SyntaxError, "shtuka.matrix must be a dim x dim array");
            for (std::size_t j = 0; j < dim; ++j)
                F.at(i, j) = parse_element(*job.field, mat[i][j],
                                           "shtuka.matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]");
        }
        job.shtuka = Shtuka(job.field, std::move(F));
    }

    if (root.contains("presentation")) {
        if (!job.field) missing_key("field", "job");
        const json& pr = root.at("presentation");
        check_keys(pr, "presentation", {"generators"});
        if (!pr.contains("generators")) missing_key("generators", "presentation");
        const json& gl = pr.at("generators");
        if (!gl.is_array()) fail(Errc::SyntaxError, "presentation.generators must be an array");
        HopfPresentation P;
        P.field = job.field;
        std::vector<std::string> names;
        for (const auto& g : gl) {
            check_keys(g, "generator", {"name", "weight", "trunc", "relation"});
            GeneratorSpec spec;
            if (!g.contains("name") || !g.at("name").is_string()) missing_key("name", "generator");
            spec.name = g.at("name").get<std::string>();
            spec.weight = static_cast<std::uint32_t>(get_uint(g, "weight", "generator " + spec.name));
            spec.trunc = get_uint(g, "trunc", "generator " + spec.name);
            names.push_back(spec.name);
            P.gens.push_back(std::move(spec));
        }
        for (std::size_t gi = 0; gi < gl.size(); ++gi) {
            const auto& g = gl[static_cast<json::size_type>(gi)];
            if (!g.contains("relation")) continue;
            const json& rel = g.at("relation");
            if (!rel.is_object()) fail(Errc::SyntaxError, "relation must map generator names to elements");
            for (auto it = rel.begin(); it != rel.end(); ++it) {
                auto pos = std::find(names.begin(), names.end(), it.key());
                if (pos == names.end()) unknown_key(it.key(), "relation of " + names[gi]);
                Code c = parse_element(*job.field, it.value(), "relation '" + names[gi] + "' -> '" + it.key() + "'");
                if (c != 0)
                    P.gens[gi].relation.emplace_back(static_cast<std::uint32_t>(pos - names.begin()), c);
            }
        }
        job.presentation = std::move(P);
    }

    if (!root.contains("cmd") || !root.at("cmd").is_string()) missing_key("cmd", "job");
    job.cmd = root.at("cmd").get<std::string>();

    if (root.contains("options")) {
        const json& o = root.at("options");
        check_keys(o, "options", {"seed", "cap", "m", "expect_iso", "exponents", "n"});
        if (o.contains("seed")) job.opts.seed = get_uint(o, "seed", "options");
        if (o.contains("cap")) job.opts.cap = get_uint(o, "cap", "options");
        if (o.contains("m")) job.opts.ext_degree = static_cast<std::uint32_t>(get_uint(o, "m", "options"));
        if (o.contains("n")) job.opts.restrict_n = static_cast<std::uint32_t>(get_uint(o, "n", "options"));
        if (o.contains("expect_iso")) {
            if (!o.at("expect_iso").is_boolean()) fail(Errc::SyntaxError, "options.expect_iso must be a boolean");
            job.opts.expect_iso = o.at("expect_iso").get<bool>();
        }
        if (o.contains("exponents")) {
            const json& e = o.at("exponents");
            if (!e.is_array()) fail(Errc::SyntaxError, "options.exponents must be an array");
            for (const auto& v : e) job.opts.exponents.push_back(v.get<std::uint64_t>());
        }
    }
    return job;
}

namespace {

void put_field(Report& rep, const Fq& F) {
    rep.machine["field.p"] = std::to_string(F.p());
    rep.machine["field.r"] = std::to_string(F.r());
    rep.machine["field.m"] = std::to_string(F.m());
    rep.machine["field.q"] = std::to_string(F.q());
    rep.machine["field.card"] = std::to_string(F.card());
}

GroupSchemeHandle group_of(const Job& job, std::uint64_t cap) {
    if (job.presentation) return GroupSchemeHandle{expand(*job.presentation, cap)};
    if (job.shtuka) return drinfeld(*job.shtuka, cap);
    missing_key("presentation or shtuka", "job");
}

void put_balance(Report& rep, const BalanceReport& b) {
    rep.machine["result.additive_type"] = b.additive_type ? "true" : "false";
    rep.machine["result.cond_i"] = b.cond_i ? "true" : "false";
    rep.machine["result.cond_ii"] = b.cond_ii ? "true" : "false";
    rep.machine["result.cond_iii"] = b.cond_iii ? "true" : "false";
    rep.machine["result.cond_iv"] = b.cond_iv ? "true" : "false";
    rep.machine["result.balanced"] = b.balanced() ? "true" : "false";
    rep.machine["result.order"] = std::to_string(b.order);
    std::ostringstream os;
    for (std::size_t i = 0; i < b.prim_ranks.size(); ++i) os << (i ? "," : "") << b.prim_ranks[i];
    rep.machine["result.prim_ranks"] = os.str();
}

std::pair<std::uint32_t, std::uint32_t> pr_of(const Job& job) {
    if (job.field) return {job.field->p(), job.field->r()};
    fail(Errc::UnknownKey, "missing key 'field' in block 'job'");
}

} // namespace

Report run(const Job& job) {
    Report rep;
    rep.machine["cmd"] = job.cmd;
    std::uint64_t cap = job.opts.cap.value_or(dimension_cap());
    std::ostringstream hs;

    if (job.cmd == "expand") {
        if (!job.presentation) missing_key("presentation", "job");
        put_field(rep, *job.field);
        FiniteHopf H = expand(*job.presentation, cap);
        rep.machine["result.order"] = std::to_string(H.order());
        rep.machine["result.profile"] = fmt_vec(eigen_profile(H));
        rep.machine["result.prim_dim"] = std::to_string(prim_dim(H));
        hs << "expanded Hopf algebra of dimension " << H.dim << " over " << job.field->describe() << "\n";
        if (H.dim <= 64) {
            std::ostringstream dump;
            dump_structure(H, dump);
            hs << dump.str();
        }
    } else if (job.cmd == "drinfeld") {
        if (!job.shtuka) missing_key("shtuka", "job");
        put_field(rep, *job.field);
        GroupSchemeHandle G = drinfeld(*job.shtuka, cap);
        rep.machine["result.order"] = std::to_string(G.hopf.order());
        rep.machine["result.rank"] = std::to_string(job.shtuka->rank);
        rep.machine["result.etale"] = is_invertible(*job.shtuka) ? "true" : "false";
        rep.machine["result.connected"] = is_nilpotent(*job.shtuka) ? "true" : "false";
        rep.machine["result.profile"] = fmt_vec(eigen_profile(G.hopf));
        put_balance(rep, is_balanced(G));
        hs << "G(M) has order " << G.hopf.order() << " (etale: " << rep.machine["result.etale"]
           << ", connected: " << rep.machine["result.connected"] << ")\n";
    } else if (job.cmd == "dieudonne") {
        GroupSchemeHandle G = group_of(job, cap);
        put_field(rep, *job.field);
        Shtuka M = dieudonne(G);
        rep.machine["result.rank"] = std::to_string(M.rank);
        for (std::size_t i = 0; i < M.rank; ++i) {
            std::ostringstream row;
            for (std::size_t j = 0; j < M.rank; ++j) row << (j ? "," : "") << job.field->str(M.F.at(i, j));
            rep.machine["result.matrix." + std::to_string(i)] = row.str();
        }
        hs << "M(G) has rank " << M.rank << "\n";
        for (std::size_t i = 0; i < M.rank; ++i) hs << "  [" << rep.machine["result.matrix." + std::to_string(i)] << "]\n";
    } else if (job.cmd == "roundtrip") {
        put_field(rep, *job.field);
        RoundtripReport rt;
        if (job.shtuka) {
            rt = roundtrip_shtuka(*job.shtuka);
            rep.machine["result.counit_iso"] = rt.counit_iso ? "true" : "false";
            hs << "v_M is " << (rt.counit_iso ? "an isomorphism" : "NOT an isomorphism") << "\n";
            if (job.opts.expect_iso && !rt.counit_iso) rep.exit_code = 1;
        } else if (job.presentation) {
            rt = roundtrip_group(GroupSchemeHandle{expand(*job.presentation, cap)}, cap);
            rep.machine["result.unit_iso"] = rt.unit_iso ? "true" : "false";
            rep.machine["result.order"] = std::to_string(rt.order_lhs);
            rep.machine["result.order_gm"] = std::to_string(rt.order_rhs);
            hs << "u_G is " << (rt.unit_iso ? "an isomorphism" : "NOT an isomorphism (" + rt.details + ")") << "\n";
            if (job.opts.expect_iso && !rt.unit_iso) rep.exit_code = 1;
        } else {
            missing_key("presentation or shtuka", "job");
        }
    } else if (job.cmd == "adjoint") {
        if (!job.presentation) missing_key("presentation", "job");
        if (!job.shtuka) missing_key("shtuka", "job");
        put_field(rep, *job.field);
        AdjunctionReport ar = adjunction_dims(GroupSchemeHandle{expand(*job.presentation, cap)}, *job.shtuka);
        rep.machine["result.dim_grp_hom"] = std::to_string(ar.dim_grp_hom);
        rep.machine["result.dim_sht_hom"] = std::to_string(ar.dim_sht_hom);
        rep.machine["result.equal"] = ar.dim_grp_hom == ar.dim_sht_hom ? "true" : "false";
        hs << "Hom_gr(G, G(M)) has F_q-dimension " << ar.dim_grp_hom << ", Hom_sht(M, M(G)) has F_q-dimension "
           << ar.dim_sht_hom << "\n";
        if (ar.dim_grp_hom != ar.dim_sht_hom) rep.exit_code = 1;
    } else if (job.cmd == "balance") {
        GroupSchemeHandle G = group_of(job, cap);
        put_field(rep, *job.field);
        put_balance(rep, is_balanced(G));
        hs << "balance report: balanced=" << rep.machine["result.balanced"] << " conditions (i)-(iv): "
           << rep.machine["result.cond_i"] << "," << rep.machine["result.cond_ii"] << ","
           << rep.machine["result.cond_iii"] << "," << rep.machine["result.cond_iv"] << "\n";
    } else if (job.cmd == "quasibalance") {
        GroupSchemeHandle G = group_of(job, cap);
        put_field(rep, *job.field);
        QuasiBalance qb = is_quasi_balanced(G);
        rep.machine["result.quasi_balanced"] = qb.quasi_balanced ? "true" : "false";
        rep.machine["result.ranks"] = fmt_vec(qb.ranks);
        hs << "quasi-balanced: " << rep.machine["result.quasi_balanced"] << " ranks (" << rep.machine["result.ranks"]
           << ")\n";
    } else if (job.cmd == "sseries") {
        auto [p, r] = pr_of(job);
        EigenCount ec = s_series(p, r, job.opts.exponents);
        rep.machine["result.q"] = std::to_string(ec.q);
        {
            std::ostringstream os;
            for (std::size_t i = 0; i < ec.s_coeffs.size(); ++i) os << (i ? "," : "") << ec.s_coeffs[i];
            rep.machine["result.s_coeffs"] = os.str();
        }
        rep.machine["result.ranks"] = fmt_vec(ec.ranks);
        hs << "S(X) coefficients: " << rep.machine["result.s_coeffs"] << "\nranks: " << rep.machine["result.ranks"]
           << "\n";
    } else if (job.cmd == "lisa") {
        auto [p, r] = pr_of(job);
        LisaVerdict v = lisa_criterion(p, r, job.opts.exponents);
        rep.machine["result.quasi_balanced"] = v.quasi_balanced ? "true" : "false";
        rep.machine["result.reason"] = v.reason;
        hs << "quasi-balanced: " << rep.machine["result.quasi_balanced"] << " (" << v.reason << ")\n";
    } else if (job.cmd == "classify") {
        GroupSchemeHandle G = group_of(job, cap);
        put_field(rep, *job.field);
        StructureReport sr = structure_decompose(G);
        rep.machine["result.etale_order"] = std::to_string(sr.etale_order);
        rep.machine["result.total_order"] = std::to_string(sr.total_order);
        rep.machine["result.connected_exponents"] =
            fmt_vec(std::vector<std::uint64_t>(sr.connected_exponents.begin(), sr.connected_exponents.end()));
        rep.machine["result.constancy_degree"] =
            sr.constancy_degree ? std::to_string(*sr.constancy_degree) : "exceeds cap";
        std::ostringstream os;
        os << "G ≅ (etale of order " << sr.etale_order;
        if (sr.constancy_degree)
            os << ", constant over F_" << [&] {
                std::uint64_t c = 1;
                for (std::uint32_t i = 0; i < *sr.constancy_degree; ++i) c *= job.field->q();
                return c;
            }();
        else
            os << ", constancy degree exceeds cap";
        os << ")";
        for (std::size_t s : sr.connected_exponents) {
            os << " × alpha_{q";
            if (s > 1) os << "^" << s;
            os << "}";
        }
        hs << os.str() << "\n";
    } else if (job.cmd == "pointcount") {
        GroupSchemeHandle G = group_of(job, cap);
        put_field(rep, *job.field);
        std::uint64_t n = point_count(G, job.opts.ext_degree);
        rep.machine["result.m"] = std::to_string(job.opts.ext_degree);
        rep.machine["result.points"] = std::to_string(n);
        hs << "#G(F_q^" << job.opts.ext_degree << ") = " << n << "\n";
    } else if (job.cmd == "selftest") {
        auto results = run_acceptance(job.opts.seed, /*fail_fast=*/true, nullptr);
        std::size_t passed = 0;
        for (const auto& r : results) {
            rep.machine["criterion." + std::to_string(r.id) + ".pass"] = r.pass ? "true" : "false";
            if (r.pass) ++passed;
            hs << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name;
            if (!r.pass) hs << " -- " << r.detail;
            hs << "\n";
            if (!r.pass && r.counterexample_job) {
                std::ofstream out("shtukalab_counterexample.json");
                out << *r.counterexample_job;
                hs << "       counterexample written to shtukalab_counterexample.json\n";
            }
        }
        rep.machine["result.passed"] = std::to_string(passed);
        rep.machine["result.total"] = std::to_string(results.size());
        hs << passed << "/" << results.size() << " criteria passed\n";
        if (passed != results.size()) rep.exit_code = 1;
    } else {
        fail(Errc::UnknownKey, "unknown command '" + job.cmd + "'");
    }

    rep.machine["status"] = "ok";
    rep.human = hs.str();
    return rep;
}

std::string render(const Report& rep, bool machine_only) {
    std::ostringstream os;
    if (!machine_only) {
        os << rep.human;
        os << "\n[machine]\n";
    }
    for (const auto& [k, v] : rep.machine) os << k << "=" << v << "\n";
    return os.str();
}

} // namespace shtukalab
