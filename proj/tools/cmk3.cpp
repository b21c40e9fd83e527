#include "cmk3/catalog.hpp"
#include "cmk3/jsonio.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace cmk3;

int emit(const Json& j, bool pretty, int code = 0) {
    std::cout << (pretty ? j.dump(2) : j.dump()) << "\n";
    return code;
}

AbelianField parse_field(long cyclotomic, long conductor, std::vector<long>& subgroup) {
    if (cyclotomic > 0) return cyclotomic_field(cyclotomic);
    if (conductor > 0) return field_from_subgroup(conductor, subgroup);
    throw CLI::ValidationError("field", "need --cyclotomic M or --conductor M [--subgroup ...]");
}

IdealSpec parse_ideal_spec(long m, const std::vector<std::string>& parts) {
    IdealSpec j;
    PrimeTable& tab = prime_table(m);
    for (const std::string& s : parts) {
        // "p[:index][^e]", e.g. "13", "13:1", "13^2"; bare p expands to the
        // full conjugation-stable set of primes above p
        long p = 0;
        int index = -1;
        long e = 1;
        size_t caret = s.find('^');
        std::string base = caret == std::string::npos ? s : s.substr(0, caret);
        if (caret != std::string::npos) e = std::stol(s.substr(caret + 1));
        size_t colon = base.find(':');
        if (colon == std::string::npos) {
            p = std::stol(base);
        } else {
            p = std::stol(base.substr(0, colon));
            index = std::stoi(base.substr(colon + 1));
        }
        if (index >= 0) {
            j.exponents[{p, index}] += e;
            const PrimeIdeal& pr = tab.prime(p, index);
            if (!pr.conj_fixed) j.exponents[{p, pr.conj_index}] += e;
        } else {
            for (const PrimeIdeal& pr : tab.primes_above(p)) j.exponents[{p, pr.index}] += e;
        }
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact lattice arithmetic for K3 surfaces with maximal CM"};
    app.require_subcommand(1);
    bool pretty = false, json = true;
    app.add_flag("--pretty", pretty, "indent JSON output");
    app.add_flag("--json", json, "JSON output (the default; kept for scripts)");

    // --- field ---
    auto* c_field = app.add_subcommand("field", "describe an abelian field");
    long f_cyc = 0, f_cond = 0;
    std::vector<long> f_sub;
    c_field->add_option("--cyclotomic", f_cyc, "conductor of a cyclotomic field");
    c_field->add_option("--conductor", f_cond, "conductor");
    c_field->add_option("--subgroup", f_sub, "subgroup generators");

    // --- splits ---
    auto* c_splits = app.add_subcommand("splits", "prime splitting data");
    long s_cyc = 0, s_cond = 0, s_p = 0;
    std::vector<long> s_sub;
    c_splits->add_option("--cyclotomic", s_cyc, "conductor of a cyclotomic field");
    c_splits->add_option("--conductor", s_cond, "conductor");
    c_splits->add_option("--subgroup", s_sub, "subgroup generators");
    c_splits->add_option("--p", s_p, "rational prime")->required();

    // --- k3-exists ---
    auto* c_exists = app.add_subcommand("k3-exists", "existence of maximal-CM K3 surfaces");
    long e_cyc = 0, e_cond = 0;
    std::vector<long> e_sub;
    c_exists->add_option("--cyclotomic", e_cyc, "conductor of a cyclotomic field");
    c_exists->add_option("--conductor", e_cond, "conductor");
    c_exists->add_option("--subgroup", e_sub, "subgroup generators");

    // --- disc-enumerate ---
    auto* c_enum = app.add_subcommand("disc-enumerate", "admissible discriminant ideals");
    long n_m = 0;
    long n_bound = 1;
    int n_s1 = 2, n_s2 = -1;
    c_enum->add_option("--cyclotomic", n_m, "conductor")->required();
    c_enum->add_option("--norm-bound", n_bound, "norm bound")->required();
    c_enum->add_option("--sigma1", n_s1, "positive index (default 2)");
    c_enum->add_option("--sigma2", n_s2, "negative index (default 2n-2)");

    // --- lattice ---
    auto* c_lat = app.add_subcommand("lattice", "construct trace lattices");
    bool l_craig = false, l_lambda = false, l_delta = false;
    long l_p = 0, l_a = 1, l_k = 0;
    int l_r = 1;
    bool l_have_k = false;
    c_lat->add_flag("--craig", l_craig, "C_k");
    c_lat->add_flag("--lambda", l_lambda, "Lambda_a");
    c_lat->add_flag("--delta", l_delta, "Delta_a");
    c_lat->add_option("--p", l_p, "prime")->required();
    c_lat->add_option("--r", l_r, "prime-power exponent (default 1)");
    c_lat->add_option("--a", l_a, "odd determinant exponent");
    c_lat->add_option("--k", l_k, "ideal power for --craig")->each([&](const std::string&) {
        l_have_k = true;
    });

    // --- disc-form ---
    auto* c_df = app.add_subcommand("disc-form", "discriminant form of a trace lattice");
    long d_p = 0, d_a = 1;
    int d_r = 1;
    bool d_lambda = false;
    c_df->add_option("--p", d_p, "prime")->required();
    c_df->add_option("--r", d_r, "prime-power exponent");
    c_df->add_option("--a", d_a, "odd exponent");
    c_df->add_flag("--lambda", d_lambda, "use Lambda_a instead of C_k");

    // --- witt ---
    auto* c_witt = app.add_subcommand("witt", "Witt class of a discriminant form");
    long w_p = 0, w_a = 1;
    int w_r = 1;
    bool w_lambda = false, w_delta = false;
    c_witt->add_option("--p", w_p, "prime")->required();
    c_witt->add_option("--r", w_r, "prime-power exponent");
    c_witt->add_option("--a", w_a, "odd exponent");
    c_witt->add_flag("--lambda", w_lambda, "Lambda_a");
    c_witt->add_flag("--delta", w_delta, "Delta_a");

    // --- twist ---
    auto* c_twist = app.add_subcommand("twist", "twist a lattice by a stable ideal");
    long t_p = 0, t_a = 1;
    bool t_delta = false;
    std::vector<std::string> t_j;
    c_twist->add_option("--p", t_p, "prime (Lambda_a over Q(zeta_p))")->required();
    c_twist->add_option("--a", t_a, "odd exponent");
    c_twist->add_flag("--delta", t_delta, "twist Delta_a instead");
    c_twist->add_option("--J", t_j, "ideal spec: p, p:index, p^e");

    // --- picard ---
    auto* c_pic = app.add_subcommand("picard", "degree-20 Picard classification");
    long p_m = 0;
    std::string p_n, p_det;
    c_pic->add_option("--cyclotomic", p_m, "conductor (degree-20 field)")->required();
    c_pic->add_option("--N", p_n, "test S_X = U(N)");
    c_pic->add_option("--det", p_det, "transcendental determinant");

    // --- surface ---
    auto* c_surf = app.add_subcommand("surface", "assemble a K3 surface record");
    long x_p = 0, x_a = 1;
    std::vector<std::string> x_j;
    c_surf->add_option("--p", x_p, "prime, 3 <= p <= 11")->required();
    c_surf->add_option("--a", x_a, "odd exponent");
    c_surf->add_option("--J", x_j, "ideal spec");

    // --- glue ---
    auto* c_glue = app.add_subcommand("glue", "even unimodular glue of Lambda and Delta+M");
    long g_p = 0, g_a = 1;
    std::vector<std::string> g_j;
    c_glue->add_option("--p", g_p, "prime in {3,7,11}")->required();
    c_glue->add_option("--a", g_a, "odd exponent");
    c_glue->add_option("--J", g_j, "ideal spec");

    // --- catalog ---
    auto* c_cat = app.add_subcommand("catalog", "verify or regenerate the example catalog");
    std::string cat_path = "data/catalog.json";
    bool cat_write = false;
    c_cat->add_option("--path", cat_path, "catalog file (default data/catalog.json)");
    c_cat->add_flag("--write", cat_write, "regenerate the catalog file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help exits 0, usage errors exit 2
    }

    try {
        if (*c_field) {
            AbelianField f = parse_field(f_cyc, f_cond, f_sub);
            Json j = to_json(f);
            j["degree"] = f.degree();
            j["is_cm"] = f.is_cm();
            j["totally_real"] = f.is_totally_real();
            if (f.is_cm()) j["real_subfield"] = to_json(f.maximal_real_subfield());
            return emit(j, pretty);
        }
        if (*c_splits) {
            AbelianField f = parse_field(s_cyc, s_cond, s_sub);
            Json j = to_json(prime_splitting(f, s_p));
            j["different_exponent"] = different_exponent(f, s_p);
            if (f.is_cm()) {
                RelativePlaceData d = relative_place_data(f, s_p);
                j["relative"] = Json{
                    {"behavior", d.behavior == PlaceBehavior::split
                                     ? "split"
                                     : (d.behavior == PlaceBehavior::inert ? "inert" : "ramified")},
                    {"places_of_F", d.num_places_F},
                    {"f_F", d.f_F},
                };
                j["f_of_p"] = f_of_p(f, s_p);
            }
            return emit(j, pretty);
        }
        if (*c_exists) {
            AbelianField f = parse_field(e_cyc, e_cond, e_sub);
            ExistenceVerdict v = exists_maximal_cm_k3(f);
            return emit(to_json(v), pretty, v.kind == ExistenceVerdict::Kind::none ? 1 : 0);
        }
        if (*c_enum) {
            AbelianField f = cyclotomic_field(n_m);
            int s2 = n_s2 >= 0 ? n_s2 : static_cast<int>(f.degree()) - 2;
            Json out = Json::array();
            for (const DiscriminantIdeal& d : enumerate_admissible(n_m, n_s1, s2, Int(n_bound)))
                out.push_back(to_json(d));
            return emit(Json{{"count", out.size()}, {"ideals", out}}, pretty);
        }
        if (*c_lat) {
            TraceLattice l;
            if (l_craig)
                l = craig_C(l_p, l_r, l_have_k ? l_k : (l_a - delta_of(l_p, l_r)) / 2);
            else if (l_delta)
                l = delta_a(l_p, l_r, l_a);
            else
                l = lambda_a(l_p, l_r, l_a);
            return emit(to_json(l), pretty);
        }
        if (*c_df) {
            TraceLattice l = d_lambda ? lambda_a(d_p, d_r, d_a)
                                      : craig_C(d_p, d_r, (d_a - delta_of(d_p, d_r)) / 2);
            return emit(to_json(discriminant_form(l.lattice)), pretty);
        }
        if (*c_witt) {
            TraceLattice l = w_lambda ? lambda_a(w_p, w_r, w_a)
                                      : (w_delta ? delta_a(w_p, w_r, w_a)
                                                 : craig_C(w_p, w_r, (w_a - delta_of(w_p, w_r)) / 2));
            WittClass w = witt_class(discriminant_form(l.lattice));
            return emit(to_json(w), pretty);
        }
        if (*c_twist) {
            TraceLattice base = t_delta ? delta_a(t_p, 1, t_a) : lambda_a(t_p, 1, t_a);
            IdealSpec j = parse_ideal_spec(t_p, t_j);
            TraceLattice l = twist(base, j);
            Json out = to_json(l);
            out["disc_module"] = to_json(discriminant_ideal(l));
            return emit(out, pretty);
        }
        if (*c_pic) {
            Int det;
            if (!p_n.empty()) {
                Int n(p_n);
                det = n * n;
            } else if (!p_det.empty()) {
                det = Int(p_det);
            } else {
                throw CLI::ValidationError("picard", "need --N or --det");
            }
            PicardVerdict v = picard_classify(p_m, det);
            return emit(to_json(v), pretty,
                        v.kind == PicardVerdict::Kind::not_realizable ? 1 : 0);
        }
        if (*c_surf) {
            IdealSpec j = parse_ideal_spec(x_p, x_j);
            K3SurfaceRecord rec = surface_X(x_p, x_a, j);
            return emit(to_json(rec), pretty);
        }
        if (*c_glue) {
            IdealSpec j = parse_ideal_spec(g_p, g_j);
            TraceLattice lam = twist(lambda_a(g_p, 1, g_a), j);
            TraceLattice del = twist(delta_a(g_p, 1, g_a), j);
            IntegerLattice s = del.lattice.direct_sum(standard_M(24 - 2 * static_cast<int>(g_p)));
            GlueResult res = glue_even_unimodular(lam.lattice, s);
            Json out;
            out["ok"] = res.ok();
            if (res.ok()) {
                Signature sig = signature(res.glued);
                out["signature"] = Json::array({sig.pos, sig.neg});
                out["det"] = res.glued.determinant().get_str();
                out["even"] = res.glued.is_even();
            } else {
                out["failure"] = res.failure;
            }
            return emit(out, pretty, res.ok() ? 0 : 1);
        }
        if (*c_cat) {
            if (cat_write) {
                catalog_write(cat_path);
                return emit(Json{{"written", cat_path}}, pretty);
            }
            CatalogReport rep = catalog_verify(cat_path);
            Json out;
            out["ok"] = rep.ok;
            out["entries"] = rep.entries;
            out["failures"] = rep.failures;
            return emit(out, pretty, rep.ok ? 0 : 1);
        }
    } catch (const CLI::Error& ex) {
        std::cout << Json{{"error", ex.what()}}.dump() << "\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cout << Json{{"error", ex.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cout << Json{{"error", ex.what()}}.dump() << "\n";
        return 1;
    }
    return 2;
}
