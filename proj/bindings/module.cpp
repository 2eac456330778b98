#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "shtukalab/job.hpp"
#include "shtukalab/selftest.hpp"

namespace py = pybind11;
using namespace shtukalab;

namespace {

/// pybind11 cannot hold shared_ptr<const T>; expose fields through a thin
/// handle instead.
struct FieldHandle {
    FqPtr ptr;
    const Fq& get() const { return *ptr; }
};

MatK matrix_from_strings(FqPtr F, const std::vector<std::vector<std::string>>& rows) {
    std::size_t n = rows.size();
    MatK M(F, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) fail(Errc::DimensionMismatch, "matrix must be square");
        for (std::size_t j = 0; j < n; ++j) M.at(i, j) = F->parse(rows[i][j]);
    }
    return M;
}

std::vector<std::vector<std::string>> matrix_to_strings(const MatK& M) {
    std::vector<std::vector<std::string>> out(M.rows, std::vector<std::string>(M.cols));
    for (std::size_t i = 0; i < M.rows; ++i)
        for (std::size_t j = 0; j < M.cols; ++j) out[i][j] = M.F->str(M.at(i, j));
    return out;
}

HopfPresentation presentation_from(FqPtr F,
                                   const std::vector<std::tuple<std::string, std::uint32_t, std::uint64_t,
                                                                std::map<std::string, std::string>>>& gens) {
    HopfPresentation P;
    P.field = std::move(F);
    std::vector<std::string> names;
    for (const auto& [name, weight, trunc, rel] : gens) {
        (void)rel;
        GeneratorSpec g;
        g.name = name;
        g.weight = weight;
        g.trunc = trunc;
        names.push_back(name);
        P.gens.push_back(std::move(g));
    }
    for (std::size_t i = 0; i < gens.size(); ++i) {
        for (const auto& [target, value] : std::get<3>(gens[i])) {
            auto it = std::find(names.begin(), names.end(), target);
            if (it == names.end()) fail(Errc::BadPresentation, "relation names a missing generator " + target);
            Code c = P.field->parse(value);
            if (c) P.gens[i].relation.emplace_back(static_cast<std::uint32_t>(it - names.begin()), c);
        }
    }
    return P;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact finite F_q-shtuka / group-scheme toolkit (C++ core)";

    py::register_exception<Error>(m, "ShtukalabError");

    py::class_<FieldHandle>(m, "Field")
        .def(py::init([](std::uint32_t p, std::uint32_t r, std::uint32_t m, std::vector<std::uint32_t> modulus) {
                 return FieldHandle{Fq::create(p, r, m, std::move(modulus))};
             }),
             py::arg("p"), py::arg("r"), py::arg("m"), py::arg("modulus"))
        .def_property_readonly("p", [](const FieldHandle& f) { return f.get().p(); })
        .def_property_readonly("r", [](const FieldHandle& f) { return f.get().r(); })
        .def_property_readonly("m", [](const FieldHandle& f) { return f.get().m(); })
        .def_property_readonly("q", [](const FieldHandle& f) { return f.get().q(); })
        .def_property_readonly("card", [](const FieldHandle& f) { return f.get().card(); })
        .def("parse", [](const FieldHandle& f, const std::string& s) { return f.get().parse(s); })
        .def("str", [](const FieldHandle& f, Code c) { return f.get().str(c); })
        .def("add", [](const FieldHandle& f, Code a, Code b) { return f.get().add(a, b); })
        .def("mul", [](const FieldHandle& f, Code a, Code b) { return f.get().mul(a, b); })
        .def("inv", [](const FieldHandle& f, Code a) { return f.get().inv(a); })
        .def("frob", [](const FieldHandle& f, Code a, std::uint64_t t) { return f.get().frob(a, t); },
             py::arg("x"), py::arg("t") = 1)
        .def("__repr__", [](const FieldHandle& f) { return f.get().describe(); });

    py::class_<Shtuka>(m, "Shtuka")
        .def(py::init([](const FieldHandle& F, const std::vector<std::vector<std::string>>& rows) {
                 return Shtuka(F.ptr, matrix_from_strings(F.ptr, rows));
             }),
             py::arg("field"), py::arg("matrix"))
        .def_property_readonly("rank", [](const Shtuka& M) { return M.rank; })
        .def_property_readonly("matrix", [](const Shtuka& M) { return matrix_to_strings(M.F); })
        .def("apply",
             [](const Shtuka& M, const std::vector<std::string>& v) {
                 std::vector<Code> w(v.size());
                 for (std::size_t i = 0; i < v.size(); ++i) w[i] = M.field->parse(v[i]);
                 auto out = shtukalab::apply(M, w);
                 std::vector<std::string> s(out.size());
                 for (std::size_t i = 0; i < out.size(); ++i) s[i] = M.field->str(out[i]);
                 return s;
             })
        .def("is_nilpotent", [](const Shtuka& M) { return is_nilpotent(M); })
        .def("is_invertible", [](const Shtuka& M) { return is_invertible(M); })
        .def("ss_nil_dims",
             [](const Shtuka& M) {
                 auto split = ss_nil_split(M);
                 return std::make_pair(split.ss_dim, split.nil_dim);
             })
        .def("cyclic_exponents", [](const Shtuka& M) { return cyclic_decompose(M).exponents; })
        .def("restrict_scalars", [](const Shtuka& M, std::size_t n) { return restrict_scalars(M, n); });

    m.def("hom_dim", [](const Shtuka& M, const Shtuka& N) { return hom_space(M, N).size(); },
          "F_q-dimension of the space of shtuka morphisms");
    m.def("isomorphic",
          [](const Shtuka& M, const Shtuka& N, std::uint64_t seed) {
              auto r = shtukas_isomorphic(M, N, seed);
              return std::make_pair(r.isomorphic, r.certain);
          },
          py::arg("a"), py::arg("b"), py::arg("seed") = 1);

    py::class_<FiniteHopf>(m, "Hopf")
        .def_property_readonly("dim", [](const FiniteHopf& H) { return H.dim; })
        .def_property_readonly("weights", [](const FiniteHopf& H) { return H.weight_class; })
        .def("eigen_profile", [](const FiniteHopf& H) { return eigen_profile(H); })
        .def("prim_dim", [](const FiniteHopf& H) { return prim_dim(H); })
        .def("dual", [](const FiniteHopf& H) { return cartier_dual(H); })
        .def("tensor", [](const FiniteHopf& A, const FiniteHopf& B) { return tensor_product(A, B); })
        .def("structure_dump", [](const FiniteHopf& H) {
            std::ostringstream os;
            dump_structure(H, os);
            return os.str();
        });

    m.def("expand",
          [](const FieldHandle& F, const std::vector<std::tuple<std::string, std::uint32_t, std::uint64_t,
                                                                std::map<std::string, std::string>>>& gens) {
              return expand(presentation_from(F.ptr, gens));
          },
          py::arg("field"), py::arg("generators"),
          "Expand a presentation: generators are (name, weight, trunc, relation) tuples");

    m.def("drinfeld", [](const Shtuka& M) { return drinfeld(M).hopf; });
    m.def("dieudonne", [](const FiniteHopf& H) { return dieudonne(GroupSchemeHandle{H}); });
    m.def("roundtrip_shtuka", [](const Shtuka& M) {
        auto r = roundtrip_shtuka(M);
        return r.counit_iso;
    });
    m.def("roundtrip_group", [](const FiniteHopf& H) {
        auto r = roundtrip_group(GroupSchemeHandle{H});
        return std::make_tuple(r.unit_iso, r.order_lhs, r.order_rhs);
    });
    m.def("adjunction_dims", [](const FiniteHopf& H, const Shtuka& M) {
        auto r = adjunction_dims(GroupSchemeHandle{H}, M);
        return std::make_pair(r.dim_grp_hom, r.dim_sht_hom);
    });

    m.def("balance_report", [](const FiniteHopf& H) {
        BalanceReport b = is_balanced(GroupSchemeHandle{H});
        py::dict d;
        d["additive_type"] = b.additive_type;
        d["cond_i"] = b.cond_i;
        d["cond_ii"] = b.cond_ii;
        d["cond_iii"] = b.cond_iii;
        d["cond_iv"] = b.cond_iv;
        d["balanced"] = b.balanced();
        d["prim_ranks"] = b.prim_ranks;
        d["order"] = b.order;
        return d;
    });
    m.def("quasi_balanced", [](const FiniteHopf& H) {
        auto qb = is_quasi_balanced(GroupSchemeHandle{H});
        return std::make_pair(qb.quasi_balanced, qb.ranks);
    });
    m.def("s_series", [](std::uint32_t p, std::uint32_t r, const std::vector<std::uint64_t>& s_list) {
        EigenCount ec = s_series(p, r, s_list);
        return std::make_tuple(ec.q, ec.s_coeffs, ec.ranks);
    });
    m.def("lisa_criterion", [](std::uint32_t p, std::uint32_t r, const std::vector<std::uint64_t>& s) {
        auto v = lisa_criterion(p, r, s);
        return std::make_pair(v.quasi_balanced, v.reason);
    });
    m.def("count_eigen_tuples", &count_eigen_tuples, py::arg("q"), py::arg("n"), py::arg("j"),
          py::arg("exhaustive") = false);
    m.def("product_rank_formula", &product_rank_formula);
    m.def("point_count", [](const FiniteHopf& H, std::uint32_t m) { return point_count(GroupSchemeHandle{H}, m); });
    m.def("classify", [](const FiniteHopf& H) {
        StructureReport r = structure_decompose(GroupSchemeHandle{H});
        py::dict d;
        d["etale_order"] = r.etale_order;
        d["connected_exponents"] = r.connected_exponents;
        d["total_order"] = r.total_order;
        if (r.constancy_degree)
            d["constancy_degree"] = *r.constancy_degree;
        else
            d["constancy_degree"] = py::none();
        return d;
    });

    m.def("run_job", [](const std::string& text, bool machine) {
        Job job = parse_spec(text);
        Report rep = run(job);
        return std::make_pair(render(rep, machine), rep.exit_code);
    },
          py::arg("text"), py::arg("machine") = true, "Parse and run a JSON job, returning (report, exit_code)");

    m.def("selftest", [](std::uint64_t seed) {
        auto results = run_acceptance(seed, false, nullptr);
        py::list out;
        for (const auto& r : results) {
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["pass"] = r.pass;
            d["detail"] = r.detail;
            out.append(d);
        }
        return out;
    });
}
