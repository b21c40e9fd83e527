#include "cmk3/jsonio.hpp"

namespace cmk3 {

Json to_json(const AbelianField& f) {
    Json j;
    j["conductor"] = f.conductor();
    j["subgroup"] = f.subgroup();
    return j;
}

Json to_json(const CyclotomicElement& x) {
    Json j;
    j["m"] = x.modulus();
    Json coeffs = Json::array();
    for (const Rat& c : x.coeffs()) coeffs.push_back(rat_str(c));
    j["coeffs"] = coeffs;
    return j;
}

Json to_json(const MatI& gram) {
    Json rows = Json::array();
    for (int i = 0; i < gram.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < gram.cols(); ++j) {
            const Int& v = gram(i, j);
            if (v.fits_slong_p())
                row.push_back(v.get_si());
            else
                row.push_back(v.get_str());
        }
        rows.push_back(row);
    }
    return rows;
}

MatI gram_from_json(const Json& j) {
    int n = static_cast<int>(j.size());
    MatI g(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(j[i].size()) != n) throw std::invalid_argument("gram not square");
        for (int c = 0; c < n; ++c) {
            const Json& v = j[i][c];
            if (v.is_number_integer())
                g(i, c) = Int(v.get<long>());
            else
                g(i, c) = Int(v.get<std::string>());
        }
    }
    return g;
}

Json to_json(const FiniteQuadraticForm& f) {
    Json j;
    Json orders = Json::array();
    for (const Int& d : f.orders()) orders.push_back(d.get_str());
    j["orders"] = orders;
    Json bil = Json::array();
    for (int i = 0; i < f.num_gens(); ++i) {
        Json row = Json::array();
        for (int c = 0; c < f.num_gens(); ++c) row.push_back(rat_str(f.bilinear()(i, c)));
        bil.push_back(row);
    }
    j["bilinear"] = bil;
    if (f.has_quadratic()) {
        Json q = Json::array();
        for (const Rat& v : f.quadratic()) q.push_back(rat_str(v));
        j["quadratic"] = q;
    }
    return j;
}

Json to_json(const WittClass& w) {
    Json j;
    j["label"] = w.label();
    Json parts = Json::array();
    for (const auto& [p, loc] : w.parts) {
        Json part;
        part["p"] = p;
        part["rank"] = loc.rank;
        if (loc.rank == 1 && p != 2) part["chi"] = loc.chi;
        parts.push_back(part);
    }
    j["parts"] = parts;
    return j;
}

Json to_json(const DiscriminantIdeal& d) {
    Json j;
    j["m"] = d.m;
    j["label"] = d.label();
    j["norm"] = d.norm().get_str();
    Json factors = Json::array();
    for (const auto& f : d.factors) {
        Json fj;
        fj["p"] = f.p;
        fj["index"] = f.index;
        fj["f"] = f.f;
        fj["conjugation_fixed"] = f.conj_fixed;
        fj["exponent"] = f.exponent;
        factors.push_back(fj);
    }
    j["factors"] = factors;
    return j;
}

Json to_json(const TraceLattice& l) {
    Json j;
    j["field"] = Json{{"conductor", l.m}, {"subgroup", Json::array({1})}};
    j["ideal"] = l.ideal.label;
    j["alpha"] = to_json(l.alpha);
    j["gram"] = to_json(l.lattice.gram());
    Signature s = signature(l.lattice);
    j["signature"] = Json::array({s.pos, s.neg});
    j["det"] = l.lattice.determinant().get_str();
    return j;
}

Json to_json(const PrimeSplitting& s) {
    Json j;
    j["p"] = s.p;
    j["e"] = s.e;
    j["f"] = s.f;
    j["g"] = s.g;
    j["frobenius_coset"] = s.frobenius_coset;
    return j;
}

Json to_json(const DiscVerdict& v) {
    Json j;
    j["admissible"] = v.admissible;
    j["reason"] = v.reason();
    Json items = Json::array();
    for (const auto& it : v.items)
        items.push_back(Json{{"condition", it.condition}, {"pass", it.pass}, {"detail", it.detail}});
    j["conditions"] = items;
    return j;
}

Json to_json(const ExistenceVerdict& v) {
    Json j;
    switch (v.kind) {
        case ExistenceVerdict::Kind::infinitely_many: j["verdict"] = "infinitely_many"; break;
        case ExistenceVerdict::Kind::none: j["verdict"] = "none"; break;
        case ExistenceVerdict::Kind::undetermined: j["verdict"] = "undetermined"; break;
    }
    j["reason"] = v.reason;
    if (!v.offending_primes.empty()) j["offending_primes"] = v.offending_primes;
    return j;
}

Json to_json(const PicardVerdict& v) {
    Json j;
    switch (v.kind) {
        case PicardVerdict::Kind::U_N:
            j["picard"] = "U(" + v.n.get_str() + ")";
            j["N"] = v.n.get_str();
            break;
        case PicardVerdict::Kind::q_I:
            j["picard"] = "q_I";
            j["d"] = v.d.get_str();
            j["conductor"] = v.c.get_str();
            if (v.gram.rows() == 2) j["representative_gram"] = to_json(v.gram);
            break;
        case PicardVerdict::Kind::not_realizable:
            j["picard"] = "not_realizable";
            j["reason"] = v.reason;
            break;
    }
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

Json to_json(const K3SurfaceRecord& r) {
    Json j;
    j["name"] = r.provenance;
    j["field"] = Json{{"conductor", r.m}, {"subgroup", Json::array({1})}};
    j["p"] = r.p;
    j["a"] = r.a;
    j["J"] = r.j_label;
    j["T"] = to_json(r.t);
    j["disc_module"] = to_json(r.disc);
    j["length"] = r.length;
    j["embeds_primitively"] = r.embeds;
    j["embeds_uniquely"] = r.embeds_unique;
    j["delta_root_count"] = r.delta_roots;
    if (r.s) {
        j["S_det"] = r.s->determinant().get_str();
        j["S_rank"] = r.s->rank();
        j["glue_verified"] = r.glue_verified;
        j["glue_equivariant"] = r.glue_equivariant;
    }
    return j;
}

}  // namespace cmk3
