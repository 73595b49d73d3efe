#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcs/coherent.hpp"
#include "mcs/evolution.hpp"
#include "mcs/expectations.hpp"
#include "mcs/families.hpp"
#include "mcs/parse.hpp"
#include "mcs/resolution.hpp"
#include "mcs/tables.hpp"
#include "mcs/verify.hpp"

using namespace molcs;

namespace {

enum class Format { Csv, Text };

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v == 0.0 ? 0.0 : v);  // no "-0"
    return buf;
}

// Rows are collected first so the text format can align columns.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
    void row(std::vector<std::string> r) { rows_.push_back(std::move(r)); }
    void print(std::ostream& os, Format f) const {
        if (f == Format::Csv) {
            auto line = [&](const std::vector<std::string>& r) {
                for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
                os << '\n';
            };
            line(header_);
            for (const auto& r : rows_) line(r);
            return;
        }
        std::vector<std::size_t> w(header_.size());
        for (std::size_t i = 0; i < header_.size(); ++i) w[i] = header_[i].size();
        for (const auto& r : rows_)
            for (std::size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], r[i].size());
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                os << r[i];
                if (i + 1 < r.size()) os << std::string(w[i] - r[i].size() + 2, ' ');
            }
            os << '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct FamilyArgs {
    int id = 1;
    std::string config;
    FamilyPtr resolve() const {
        if (config.empty()) return builtin_family(id);
        std::ifstream in(config);
        if (!in) throw ParseError("cannot open family config " + config);
        auto f = parse_family_config(in, config);
        validate_family(*f);
        return f;
    }
};

void add_family_options(CLI::App* sub, FamilyArgs& fa) {
    sub->add_option("--family", fa.id, "built-in family 1..8")->check(CLI::Range(1, 8));
    sub->add_option("--family-config", fa.config, "file: '<half|integer> <radius|inf>' then 'two_j re im' rows");
}

struct PointArgs {
    std::string z = "0.5", zeta_l = "0", zeta_m = "0";
};

void add_point_options(CLI::App* sub, PointArgs& pa) {
    sub->add_option("--z", pa.z, "complex z, e.g. 0.3+0.2i");
    sub->add_option("--zeta-l,--zl", pa.zeta_l, "lab stereographic parameter");
    sub->add_option("--zeta-m,--zm", pa.zeta_m, "molecular stereographic parameter");
}

void print_defects(const std::vector<verify::Check>& failures) {
    for (const auto& c : failures)
        std::cerr << "DEFECT " << c.name << ' ' << num(c.value) << ' ' << (c.at_least ? ">" : "<=") << num(c.tol) << '\n';
}

int cmd_families(Format fmt) {
    Table t({"id", "name", "tower", "radius", "measure_support", "c0", "c_half", "c1"});
    for (int id = 1; id <= 8; ++id) {
        const auto f = builtin_family(id);
        t.row({std::to_string(id), f->name, to_string(f->tower), num(f->radius), num(f->f_support),
               num(f->coeff(0).real()), num(f->coeff(1).real()), num(f->coeff(2).real())});
    }
    t.print(std::cout, fmt);
    return 0;
}

int cmd_mcs(const FamilyArgs& fa, const PointArgs& pa, int two_j_max, const std::string& out) {
    const auto fam = fa.resolve();
    const auto p = CoherentParams::make(fam, parse_complex(pa.z), parse_complex(pa.zeta_l), parse_complex(pa.zeta_m));
    const SpaceSpec sp = two_j_max >= 0 ? SpaceSpec{two_j_max, fam->tower} : default_space(p);
    const auto s = mcs(p, sp);
    if (out.empty() || out == "-") {
        write_state(std::cout, s);
    } else {
        std::ofstream os(out);
        if (!os) throw ParseError("cannot write " + out);
        write_state(os, s);
    }
    std::cerr << "# " << s.size() << " amplitudes, two_j_max " << sp.two_j_max << ", tail weight "
              << num(tail_weight(*fam, p.x(), sp.two_j_max)) << '\n';
    return 0;
}

int cmd_expect(const FamilyArgs& fa, const PointArgs& pa, Format fmt) {
    const auto fam = fa.resolve();
    const auto p = CoherentParams::make(fam, parse_complex(pa.z), parse_complex(pa.zeta_l), parse_complex(pa.zeta_m));
    const auto e = mcs_expectations(p);
    Table t({"quantity", "re", "im"});
    auto real = [&](const std::string& n, double v) { t.row({n, num(v), "0"}); };
    auto cx = [&](const std::string& n, cplx v) { t.row({n, num(v.real()), num(v.imag())}); };
    real("J0", e.at_z.J0);
    real("J2", e.at_z.Jsq);
    real("var1", e.at_z.var1);
    real("var2", e.at_z.var2);
    real("var0", e.at_z.var0);
    real("var1*var2", e.at_z.products.xy);
    real("var1*var0", e.at_z.products.xz);
    real("var2*var0", e.at_z.products.yz);
    const char* axes[] = {"1", "2", "0"};
    for (int i = 0; i < 3; ++i) real(std::string("JL") + axes[i], e.JL[i]);
    for (int i = 0; i < 3; ++i) real(std::string("JM") + axes[i], e.JM[i]);
    const char* half[] = {"-", "+"};
    if (fam->tower == Tower::HalfInteger)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) cx(std::string("S") + half[a] + half[b], e.at_z.S(a, b));
    const char* one[] = {"-", "0", "+"};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) cx(std::string("V") + one[a] + one[b], e.at_z.V(a, b));
    t.print(std::cout, fmt);
    return 0;
}

std::string status_of(int id, const std::string& q, double rel, double tol, bool& bad) {
    if (table_forms::find_discrepancy(id, q)) return "fixture";
    if (rel <= tol) return "match";
    bad = true;
    return "mismatch";
}

int cmd_tables(const std::string& which, int points, Format fmt) {
    bool bad = false;
    const double tol = 1e-9;
    auto grid = [&](const SequenceFamily& f) {
        std::vector<double> y;
        const double top = std::isfinite(f.radius) ? 0.95 * f.radius : 5.0;
        for (int i = 1; i <= points; ++i) y.push_back(top * i / points);
        return y;
    };
    if (which == "norms" || which == "expectations") {
        Table t({"family", "abs_z", "quantity", "table", "oracle", "rel_diff", "status"});
        for (int id = 1; id <= 8; ++id) {
            const auto f = builtin_family(id);
            for (double y : grid(*f)) {
                if (which == "norms") {
                    const double tab = table_forms::norm(id, y), orc = norm_series(*f, y * y).value;
                    const double rel = std::abs(tab - orc) / orc;
                    t.row({std::to_string(id), num(y), "N", num(tab), num(orc), num(rel), status_of(id, "N", rel, tol, bad)});
                } else {
                    const auto e = mfs_expectations(f, y);
                    const double j0 = table_forms::j0(id, y), j2 = table_forms::jsq(id, y);
                    const double r0 = std::abs(j0 - e.J0) / std::abs(e.J0), r2 = std::abs(j2 - e.Jsq) / std::abs(e.Jsq);
                    t.row({std::to_string(id), num(y), "J0", num(j0), num(e.J0), num(r0), status_of(id, "J0", r0, tol, bad)});
                    t.row({std::to_string(id), num(y), "J2", num(j2), num(e.Jsq), num(r2), status_of(id, "J2", r2, tol, bad)});
                }
            }
        }
        t.print(std::cout, fmt);
    } else if (which == "measures") {
        Table t({"family", "two_j", "integral", "target", "rel_defect", "status"});
        for (int id = 1; id <= 8; ++id) {
            const auto f = builtin_family(id);
            for (const auto& e : mellin_moment_check(measure_for(f), tower_two_js(f->tower, 8)).entries) {
                const bool ok = e.rel_defect <= 1e-8;
                bad = bad || !ok;
                t.row({std::to_string(id), std::to_string(e.two_j), num(e.integral), num(e.target), num(e.rel_defect),
                       ok ? "match" : "mismatch"});
            }
        }
        t.print(std::cout, fmt);
    } else if (which == "spinor" || which == "vector") {
        Table t({"family", "abs_z", "quantity", "table_re", "table_im", "oracle_re", "oracle_im", "rel_diff", "status"});
        auto emit = [&](int id, double y, const std::string& q, cplx tab, cplx orc) {
            const double rel = std::abs(tab - orc) / std::max(std::abs(orc), 1e-300);
            t.row({std::to_string(id), num(y), q, num(tab.real()), num(tab.imag()), num(orc.real()), num(orc.imag()),
                   num(rel), status_of(id, q, rel, tol, bad)});
        };
        const std::vector<int> ids = which == "spinor" ? std::vector<int>{4} : std::vector<int>{4, 8};
        for (int id : ids) {
            const auto f = builtin_family(id);
            for (double y : grid(*f)) {
                const cplx z = y;  // the tables are given for real positive z
                const auto e = mfs_expectations(f, z);
                if (which == "spinor") {
                    emit(id, y, "S--", table_forms::s_minus_family4(std::sqrt(z)), e.S(0, 0));
                } else {
                    emit(id, y, "V--", table_forms::v_minus(id, z), e.V(0, 0));
                    emit(id, y, "V00", table_forms::v00(id, y), e.V(1, 1));
                }
            }
        }
        t.print(std::cout, fmt);
    } else {
        throw ParseError("--which must be norms|expectations|measures|spinor|vector");
    }
    if (bad) std::cerr << "DEFECT tables " << which << " mismatch beyond " << num(tol) << '\n';
    return bad ? 1 : 0;
}

int report_suites(const std::vector<verify::SuiteResult>& suites, Format fmt) {
    Table t({"criterion", "suite", "check", "value", "tol", "status"});
    bool ok = true;
    for (const auto& s : suites) {
        for (const auto& c : s.checks)
            t.row({std::to_string(s.id), s.title, c.name, num(c.value), std::string(c.at_least ? ">" : "<=") + num(c.tol),
                   c.pass() ? "PASS" : "FAIL"});
        if (!s.passed()) {
            ok = false;
            print_defects(s.failures());
        }
    }
    t.print(std::cout, fmt);
    return ok ? 0 : 1;
}

int cmd_verify_unity(const FamilyArgs& fa, int jmax, Format fmt) {
    const auto fam = fa.resolve();
    std::optional<Measure> meas;
    if (fam->closed_f) meas = measure_for(fam);
    const auto rep = unity_suite(fam, meas, 2 * jmax);
    Table t({"two_j", "two_k", "two_m", "re", "im", "defect"});
    for (const auto& e : rep.diagonal)
        t.row({std::to_string(e.label.two_j), std::to_string(e.label.two_k), std::to_string(e.label.two_m),
               num(e.value.real()), num(e.value.imag()), num(std::abs(e.value - 1.0))});
    t.print(std::cout, fmt);
    std::cout << "# max diagonal defect " << num(rep.max_diag_defect) << ", max off-diagonal " << num(rep.max_offdiag)
              << ", brute vs factorized " << num(rep.brute_max_diff) << '\n';
    if (!rep.note.empty()) std::cout << "# " << rep.note << '\n';
    if (rep.passed()) return 0;
    std::cerr << "DEFECT unity diagonal " << num(rep.max_diag_defect) << " <=1e-04\n";
    return 1;
}

int cmd_evolve(const FamilyArgs& fa, const PointArgs& pa, const std::string& drive_file, double t_end, double dt,
               int every, Format fmt) {
    const auto fam = fa.resolve();
    const auto p = CoherentParams::make(fam, parse_complex(pa.z), parse_complex(pa.zeta_l), parse_complex(pa.zeta_m));
    DriveCoefficients drive;
    if (!drive_file.empty()) {
        std::ifstream in(drive_file);
        if (!in) throw ParseError("cannot open drive file " + drive_file);
        drive = parse_drive(in);
    }
    const auto traj = integrate(drive, initial_state(p), t_end, dt);
    Table t({"t", "zetaL_re", "zetaL_im", "zetaM_re", "zetaM_im", "sigma", "JL1", "JL2", "JL0", "JM1", "JM2", "JM0"});
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (i % std::size_t(std::max(every, 1)) != 0 && i + 1 != traj.size()) continue;
        const auto& s = traj[i];
        const auto e = mcs_expectations(params_at(p, s));
        t.row({num(s.t), num(s.zeta_L.real()), num(s.zeta_L.imag()), num(s.zeta_M.real()), num(s.zeta_M.imag()),
               num(s.sigma), num(e.JL[0]), num(e.JL[1]), num(e.JL[2]), num(e.JM[0]), num(e.JM[1]), num(e.JM[2])});
    }
    t.print(std::cout, fmt);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Molecular coherent states: tables, verification suites, states and evolution"};
    app.fallthrough();  // global --format accepted after the subcommand too
    app.require_subcommand(1);
    std::string format = "csv";
    app.add_option("--format", format, "csv|text")->check(CLI::IsMember({"csv", "text"}));

    app.add_subcommand("families", "list the built-in coefficient families");

    FamilyArgs fa;
    PointArgs pa;
    int two_j_max = -1;
    std::string out;
    auto* mcs_cmd = app.add_subcommand("mcs", "build a coherent state and write it in the state file format");
    add_family_options(mcs_cmd, fa);
    add_point_options(mcs_cmd, pa);
    mcs_cmd->add_option("--two-jmax", two_j_max, "truncation (doubled j); default is adaptive");
    mcs_cmd->add_option("-o,--out", out, "output file, '-' for stdout");

    auto* expect_cmd = app.add_subcommand("expect", "closed-form expectation values at Z = (z, zeta_L, zeta_M)");
    add_family_options(expect_cmd, fa);
    add_point_options(expect_cmd, pa);

    std::string which = "norms";
    int points = 20;
    auto* tables_cmd = app.add_subcommand("tables", "compare the tabulated closed forms with the series");
    auto* reproduce = tables_cmd->add_subcommand("reproduce", "emit table-versus-oracle rows");
    tables_cmd->require_subcommand(1);
    reproduce->add_option("--which", which, "norms|expectations|measures|spinor|vector")
        ->check(CLI::IsMember({"norms", "expectations", "measures", "spinor", "vector"}));
    reproduce->add_option("--points", points, "sample count in |z| per family")->check(CLI::PositiveNumber);

    std::string suite = "all";
    int jmax = 2;
    std::uint64_t seed = 20240601;
    auto* verify_cmd = app.add_subcommand("verify", "run invariant suites; nonzero exit on any defect");
    verify_cmd->add_option("suite", suite, "unity|algebra|norms|expectations|mellin|coherent|uncertainty|zrep|evolution|all")
        ->check(CLI::IsMember(
            {"unity", "algebra", "norms", "expectations", "mellin", "coherent", "uncertainty", "zrep", "evolution", "all"}));
    verify_cmd->add_option("--jmax", jmax, "largest j checked (unity, algebra, zrep)")->check(CLI::Range(0, 8));
    verify_cmd->add_option("--seed", seed, "seed for random draws");
    add_family_options(verify_cmd, fa);

    std::string drive_file;
    double t_end = 1.0, dt = 1e-3;
    int every = 1;
    auto* evolve_cmd = app.add_subcommand("evolve", "integrate the parameter flow and print the trajectory");
    add_family_options(evolve_cmd, fa);
    add_point_options(evolve_cmd, pa);
    evolve_cmd->add_option("--drive", drive_file, "key = value file with aL, aL0, aM, aM0");
    evolve_cmd->add_option("--t-end", t_end, "final time")->check(CLI::NonNegativeNumber);
    evolve_cmd->add_option("--dt", dt, "step")->check(CLI::PositiveNumber);
    evolve_cmd->add_option("--every", every, "print every n-th step")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);
    const Format fmt = format == "text" ? Format::Text : Format::Csv;

    try {
        if (app.got_subcommand("families")) return cmd_families(fmt);
        if (app.got_subcommand(mcs_cmd)) return cmd_mcs(fa, pa, two_j_max, out);
        if (app.got_subcommand(expect_cmd)) return cmd_expect(fa, pa, fmt);
        if (app.got_subcommand(tables_cmd)) return cmd_tables(which, points, fmt);
        if (app.got_subcommand(evolve_cmd)) return cmd_evolve(fa, pa, drive_file, t_end, dt, every, fmt);
        if (app.got_subcommand(verify_cmd)) {
            if (suite == "unity" && verify_cmd->count("--family")) return cmd_verify_unity(fa, jmax, fmt);
            std::vector<verify::SuiteResult> r;
            if (suite == "norms" || suite == "all") r.push_back(verify::norms(false));
            if (suite == "expectations" || suite == "all") r.push_back(verify::expectations());
            if (suite == "mellin" || suite == "all") r.push_back(verify::mellin());
            if (suite == "unity" || suite == "all") r.push_back(verify::unity(2 * std::min(jmax, 2)));
            if (suite == "algebra" || suite == "all") r.push_back(verify::algebra(2 * std::max(jmax, 1)));
            if (suite == "coherent" || suite == "all") r.push_back(verify::coherent(seed));
            if (suite == "uncertainty" || suite == "all") r.push_back(verify::uncertainty(seed));
            if (suite == "zrep" || suite == "all") r.push_back(verify::zrep(seed, 2 * jmax));
            if (suite == "evolution" || suite == "all") r.push_back(verify::evolution());
            return report_suites(r, fmt);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
