#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "nhf/nhflow.h"

namespace {

struct Handles {
    nhf_domain* dom = nullptr;
    nhf_problem* pb = nullptr;
    ~Handles() {
        nhf_problem_free(pb);
        nhf_domain_free(dom);
    }
};

} // namespace

TEST_SUITE("capi") {

TEST_CASE("domain lifecycle and error reporting") {
    nhf_domain* dom = nullptr;
    CHECK(nhf_domain_create(1, 1, 1, 8, &dom) == NHF_OK);
    CHECK(nhf_domain_resolution(dom) == 8);
    CHECK(nhf_domain_spacing(dom) == doctest::Approx(1.0 / 9));
    CHECK(nhf_domain_volume(dom) == 1.0);
    CHECK(nhf_domain_diameter(dom) == doctest::Approx(std::sqrt(3.0)));
    double lengths[3];
    nhf_domain_lengths(dom, lengths);
    CHECK(lengths[1] == 1.0);
    CHECK(nhf_domain_first_eigenvalue(dom) > 0.0);
    nhf_domain_free(dom);

    nhf_domain* bad = nullptr;
    CHECK(nhf_domain_create(1, 2, 1, 8, &bad) == NHF_ERR_INVALID_ARGUMENT);
    CHECK(std::string(nhf_last_error()).find("anisotropic") != std::string::npos);
    CHECK(bad == nullptr);
}

TEST_CASE("field operations and norms") {
    Handles h;
    REQUIRE(nhf_domain_create(1, 1, 1, 6, &h.dom) == NHF_OK);
    nhf_field* f = nullptr;
    REQUIRE(nhf_field_create(h.dom, nullptr, &f) == NHF_OK);
    CHECK(nhf_field_size(f) == 216);
    const double center[3] = {0.5, 0.5, 0.5};
    CHECK(nhf_field_add_bump(f, center, 0.3, 2.0, "cos2") == NHF_OK);
    CHECK(nhf_field_sup_norm(f) > 0.0);
    CHECK(nhf_field_l2_norm_sq(f) > 0.0);
    CHECK(nhf_field_h1_seminorm_sq(f) > 0.0);
    double lp = 0.0;
    CHECK(nhf_field_lp_norm(f, 2.0, &lp) == NHF_OK);
    CHECK(lp == doctest::Approx(std::sqrt(nhf_field_l2_norm_sq(f))));
    CHECK(nhf_field_lp_norm(f, 0.5, &lp) == NHF_ERR_INVALID_ARGUMENT);
    CHECK(nhf_field_add_bump(f, center, 0.3, 1.0, "nope") ==
          NHF_ERR_INVALID_ARGUMENT);

    nhf_field* copy = nullptr;
    REQUIRE(nhf_field_copy(f, &copy) == NHF_OK);
    CHECK(nhf_field_scale(copy, -1.0) == NHF_OK);
    CHECK(nhf_field_axpy(copy, 1.0, f) == NHF_OK);  // copy = -f + f = 0
    CHECK(nhf_field_sup_norm(copy) == 0.0);
    nhf_field_free(copy);

    // save / load round trip through the sidecar
    const auto dir = std::filesystem::temp_directory_path() / "nhf_capi_io";
    std::filesystem::create_directories(dir);
    const std::string base = (dir / "f").string();
    CHECK(nhf_field_save(f, base.c_str(), 2.5) == NHF_OK);
    nhf_field* loaded = nullptr;
    double p_loaded = 0.0;
    CHECK(nhf_field_load(base.c_str(), &loaded, &p_loaded) == NHF_OK);
    CHECK(p_loaded == 2.5);
    std::vector<double> a(nhf_field_size(f)), b(nhf_field_size(loaded));
    CHECK(nhf_field_values(f, a.data()) == NHF_OK);
    CHECK(nhf_field_values(loaded, b.data()) == NHF_OK);
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    nhf_field_free(loaded);
    nhf_field_free(f);
    std::filesystem::remove_all(dir);
}

TEST_CASE("problem: evaluation, fibering, kernel hooks") {
    Handles h;
    REQUIRE(nhf_domain_create(1, 1, 1, 8, &h.dom) == NHF_OK);
    REQUIRE(nhf_problem_create(h.dom, 2.5, &h.pb) == NHF_OK);
    CHECK(nhf_problem_exponent(h.pb) == 2.5);

    nhf_problem* bad = nullptr;
    CHECK(nhf_problem_create(h.dom, 0.5, &bad) == NHF_ERR_INVALID_ARGUMENT);

    nhf_field* u = nullptr;
    REQUIRE(nhf_field_random_smooth(h.dom, 99, 3, &u) == NHF_OK);

    nhf_functional_report rep;
    REQUIRE(nhf_evaluate(h.pb, u, &rep) == NHF_OK);
    const double rhs = rep.nehari / 5.0 + (0.5 - 0.2) * rep.grad_sq;
    CHECK(rep.energy == doctest::Approx(rhs).epsilon(1e-12));

    // fast and direct potentials agree through the C surface
    nhf_field *zf = nullptr, *zd = nullptr;
    REQUIRE(nhf_riesz_potential(h.pb, u, 1, &zf) == NHF_OK);
    REQUIRE(nhf_riesz_potential(h.pb, u, 0, &zd) == NHF_OK);
    std::vector<double> vf(nhf_field_size(zf)), vd(nhf_field_size(zd));
    nhf_field_values(zf, vf.data());
    nhf_field_values(zd, vd.data());
    double dev = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < vf.size(); ++i) {
        dev = std::max(dev, std::abs(vf[i] - vd[i]));
        scale = std::max(scale, std::abs(vd[i]));
    }
    CHECK(dev / scale <= 1e-10);
    nhf_field_free(zf);
    nhf_field_free(zd);

    double t_star = 0.0, level = 0.0, pairing = 0.0;
    CHECK(nhf_fibering_t_star(h.pb, u, &t_star) == NHF_OK);
    CHECK(nhf_mountain_level(h.pb, u, &level) == NHF_OK);
    CHECK(t_star > 0.0);
    CHECK(level > 0.0);
    CHECK(nhf_interaction(h.pb, u, u, &pairing) == NHF_OK);
    CHECK(pairing > 0.0);

    double wmin = 0.0, wmax = 0.0, asym = 0.0;
    CHECK(nhf_problem_kernel_stats(h.pb, &wmin, &wmax, &asym) == NHF_OK);
    CHECK(wmin > 0.0);
    CHECK(asym == 0.0);
    CHECK(nhf_problem_corrupt_kernel(h.pb) == NHF_OK);
    CHECK(nhf_problem_kernel_stats(h.pb, &wmin, &wmax, &asym) == NHF_OK);
    CHECK(wmin < 0.0);

    nhf_field_free(u);
}

TEST_CASE("domain mismatch surfaces as its own status") {
    Handles h;
    REQUIRE(nhf_domain_create(1, 1, 1, 8, &h.dom) == NHF_OK);
    REQUIRE(nhf_problem_create(h.dom, 2.5, &h.pb) == NHF_OK);
    nhf_domain* other = nullptr;
    REQUIRE(nhf_domain_create(1, 1, 1, 9, &other) == NHF_OK);
    nhf_field* u = nullptr;
    REQUIRE(nhf_field_create(other, nullptr, &u) == NHF_OK);
    nhf_functional_report rep;
    CHECK(nhf_evaluate(h.pb, u, &rep) == NHF_ERR_DOMAIN_MISMATCH);
    nhf_field_free(u);
    nhf_domain_free(other);
}

TEST_CASE("flow run, trace access, summary JSON buffer protocol") {
    Handles h;
    REQUIRE(nhf_domain_create(1, 1, 1, 8, &h.dom) == NHF_OK);
    REQUIRE(nhf_problem_create(h.dom, 2.5, &h.pb) == NHF_OK);
    nhf_field* u0 = nullptr;
    REQUIRE(nhf_field_create(h.dom, nullptr, &u0) == NHF_OK);
    const double center[3] = {0.5, 0.5, 0.5};
    REQUIRE(nhf_field_add_bump(u0, center, 0.3, 0.5, "cos2") == NHF_OK);

    nhf_flow_config cfg;
    nhf_flow_config_default(&cfg);
    cfg.t_horizon = 1.0;
    nhf_flow_result* res = nullptr;
    REQUIRE(nhf_flow_run(h.pb, u0, &cfg, &res) == NHF_OK);
    CHECK(nhf_flow_verdict(res) == NHF_VERDICT_GLOBAL_DECAY);
    CHECK(nhf_flow_trace_rows(res) >= 3);
    nhf_trace_row row;
    CHECK(nhf_flow_trace_row(res, 0, &row) == NHF_OK);
    CHECK(row.step == 0);
    CHECK(nhf_flow_trace_row(res, 1u << 30, &row) == NHF_ERR_INVALID_ARGUMENT);

    size_t needed = 0;
    CHECK(nhf_flow_summary_json(res, nullptr, 0, &needed) ==
          NHF_ERR_INVALID_ARGUMENT);
    std::string buf(needed, '\0');
    CHECK(nhf_flow_summary_json(res, buf.data(), buf.size(), &needed) == NHF_OK);
    CHECK(buf.find("\"verdict\":\"GlobalDecay\"") != std::string::npos);
    CHECK(buf.find("\"certificate\"") != std::string::npos);
    CHECK(buf.find("\"bounds\"") != std::string::npos);

    double de = 0.0, dl = 0.0;
    CHECK(nhf_flow_verify_identities(res, &de, &dl) == NHF_OK);
    int pass = 0;
    int64_t bad_row = -1;
    double max_h1 = 0.0;
    CHECK(nhf_flow_check_bounds(h.pb, res, &pass, &bad_row, &max_h1) == NHF_OK);
    CHECK(pass == 1);

    nhf_flow_result_free(res);
    nhf_field_free(u0);
}

TEST_CASE("check_bounds requires a GlobalDecay verdict") {
    Handles h;
    REQUIRE(nhf_domain_create(1, 1, 1, 8, &h.dom) == NHF_OK);
    REQUIRE(nhf_problem_create(h.dom, 2.5, &h.pb) == NHF_OK);
    nhf_field* u0 = nullptr;
    REQUIRE(nhf_field_create(h.dom, nullptr, &u0) == NHF_OK);
    const double center[3] = {0.5, 0.5, 0.5};
    REQUIRE(nhf_field_add_bump(u0, center, 0.3, 1.0, "cos2") == NHF_OK);
    nhf_flow_config cfg;
    nhf_flow_config_default(&cfg);
    cfg.t_horizon = 1e-5;  // forces Undetermined
    nhf_flow_result* res = nullptr;
    REQUIRE(nhf_flow_run(h.pb, u0, &cfg, &res) == NHF_OK);
    REQUIRE(nhf_flow_verdict(res) == NHF_VERDICT_UNDETERMINED);
    int pass = 0;
    CHECK(nhf_flow_check_bounds(h.pb, res, &pass, nullptr, nullptr) ==
          NHF_ERR_INVALID_ARGUMENT);
    nhf_flow_result_free(res);
    nhf_field_free(u0);
}

TEST_CASE("variational and construction round trips at small size") {
    Handles h;
    REQUIRE(nhf_domain_create(1, 1, 1, 8, &h.dom) == NHF_OK);
    REQUIRE(nhf_problem_create(h.dom, 2.5, &h.pb) == NHF_OK);

    nhf_stationary_result* st = nullptr;
    REQUIRE(nhf_stationary_solve(h.pb, nullptr, 1e-8, 4000, &st) == NHF_OK);
    nhf_stationary_info info;
    REQUIRE(nhf_stationary_info_get(st, &info) == NHF_OK);
    CHECK(info.residual_rel <= 1e-8);
    CHECK(info.positive == 1);
    size_t needed = 0;
    nhf_stationary_json(st, "u_star", nullptr, 0, &needed);
    std::string json(needed, '\0');
    CHECK(nhf_stationary_json(st, "u_star", json.data(), json.size(), &needed) ==
          NHF_OK);
    CHECK(json.find("\"mu\":") != std::string::npos);
    CHECK(json.find("\"u_star\"") != std::string::npos);

    nhf_field* u_star = nullptr;
    REQUIRE(nhf_stationary_field(st, &u_star) == NHF_OK);
    nhf_field *plus = nullptr, *minus = nullptr;
    CHECK(nhf_dichotomy_pair(h.pb, u_star, &plus, &minus) == NHF_OK);
    nhf_functional_report rp, rm;
    nhf_evaluate(h.pb, plus, &rp);
    nhf_evaluate(h.pb, minus, &rm);
    CHECK(rp.nehari > 0.0);
    CHECK(rm.nehari < 0.0);
    nhf_field_free(plus);
    nhf_field_free(minus);

    nhf_lemma54_info linfo;
    nhf_field* datum = nullptr;
    CHECK(nhf_lemma54_datum(h.pb, u_star, &datum, &linfo) == NHF_OK);
    CHECK(linfo.criterion_lhs >= linfo.criterion_rhs);
    CHECK(linfo.nehari < 0.0);
    nhf_field_free(datum);
    nhf_field_free(u_star);
    nhf_stationary_result_free(st);

    nhf_depth_result* depth = nullptr;
    REQUIRE(nhf_well_depth(h.pb, 8, 5, 2, &depth) == NHF_OK);
    nhf_depth_info dinfo;
    REQUIRE(nhf_depth_info_get(depth, &dinfo) == NHF_OK);
    CHECK(dinfo.spread_rel <= 0.02);
    CHECK(dinfo.d_est > 0.0);
    nhf_depth_result_free(depth);

    nhf_threshold_report rep;
    CHECK(nhf_thresholds(h.pb, 2.0 * dinfo.d_est, 16, 5, &rep) == NHF_OK);
    CHECK(rep.lambda_closed_upper ==
          doctest::Approx(nhf_threshold_closed_form(h.dom, 2.5, 2.0 * dinfo.d_est)));
}

TEST_CASE("recipe writing produces the JSON plus field files") {
    nhf_domain* dom = nullptr;
    REQUIRE(nhf_domain_create(1, 1, 1, 14, &dom) == NHF_OK);
    nhf_problem* pb = nullptr;
    REQUIRE(nhf_problem_create(dom, 2.5, &pb) == NHF_OK);
    nhf_recipe* rec = nullptr;
    REQUIRE(nhf_high_energy_datum(pb, 60.0, 0.0, 0, &rec) == NHF_OK);
    nhf_recipe_info info;
    REQUIRE(nhf_recipe_info_get(rec, &info) == NHF_OK);
    CHECK(std::abs(info.energy - 60.0) <= 60.0 * 1e-6);

    const auto dir = std::filesystem::temp_directory_path() / "nhf_recipe_out";
    std::filesystem::remove_all(dir);
    CHECK(nhf_recipe_write(rec, dir.string().c_str()) == NHF_OK);
    CHECK(std::filesystem::exists(dir / "recipe.json"));
    for (const char* base : {"u_M", "v", "w"}) {
        CHECK(std::filesystem::exists(dir / (std::string(base) + ".f64")));
        CHECK(std::filesystem::exists(dir / (std::string(base) + ".json")));
    }
    // the stored u_M reloads bit-exact
    nhf_field* loaded = nullptr;
    double p_loaded = 0.0;
    CHECK(nhf_field_load((dir / "u_M").string().c_str(), &loaded, &p_loaded) ==
          NHF_OK);
    CHECK(p_loaded == 2.5);
    nhf_field* u_m = nullptr;
    REQUIRE(nhf_recipe_field(rec, NHF_RECIPE_U_M, &u_m) == NHF_OK);
    std::vector<double> a(nhf_field_size(u_m)), b(nhf_field_size(loaded));
    nhf_field_values(u_m, a.data());
    nhf_field_values(loaded, b.data());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    nhf_field_free(u_m);
    nhf_field_free(loaded);
    nhf_recipe_free(rec);
    nhf_problem_free(pb);
    nhf_domain_free(dom);
    std::filesystem::remove_all(dir);
}

} // TEST_SUITE
