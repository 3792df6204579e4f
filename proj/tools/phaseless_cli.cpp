#include "phaseless/analysis.hpp"
#include "phaseless/io.hpp"
#include "phaseless/lattices.hpp"
#include "phaseless/retrieval.hpp"
#include "phaseless/stft.hpp"
#include "phaseless/types.hpp"
#include "phaseless/version.hpp"
#include "phaseless/windows.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace phaseless;

// Command-line misuse (bad grammar, wrong flag combination): exit code 1.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t from = 0;
    while (true) {
        std::size_t at = s.find(sep, from);
        if (at == std::string::npos) {
            out.push_back(s.substr(from));
            return out;
        }
        out.push_back(s.substr(from, at - from));
        from = at + 1;
    }
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw usage_error(what + ": cannot parse number '" + s + "'");
    }
}

std::int64_t to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw usage_error(what + ": cannot parse integer '" + s + "'");
    }
}

// Signal grammar: '+'-joined terms.
//   hermite:n[:re[:im]]  adds (re + i im) h_n (default coefficient 1)
//   random:k             adds a unit-norm mixture of h_0..h_{k-1} drawn from rng
//   phase:x              multiplies the whole signal by e^{2 pi i x}
Signal parse_signal_expr(const std::string& expr, const GridSpec& g, Rng& rng) {
    std::vector<cplx> coeffs;
    cplx phase = 1.0;
    bool any = false;
    for (const auto& term : split(expr, '+')) {
        auto parts = split(term, ':');
        const std::string& kind = parts[0];
        if (kind == "hermite") {
            if (parts.size() < 2 || parts.size() > 4)
                throw usage_error("signal: hermite term needs n[:re[:im]], got '" + term + "'");
            std::int64_t n = to_int(parts[1], "signal");
            if (n < 0) throw usage_error("signal: hermite order must be >= 0");
            double re = parts.size() > 2 ? to_double(parts[2], "signal") : 1.0;
            double im = parts.size() > 3 ? to_double(parts[3], "signal") : 0.0;
            if (coeffs.size() <= static_cast<std::size_t>(n)) coeffs.resize(n + 1, 0.0);
            coeffs[n] += cplx(re, im);
            any = true;
        } else if (kind == "random") {
            if (parts.size() != 2) throw usage_error("signal: random term needs a count, got '" + term + "'");
            std::int64_t k = to_int(parts[1], "signal");
            if (k < 1) throw usage_error("signal: random term count must be >= 1");
            std::vector<cplx> r(k);
            double nrm2 = 0.0;
            for (auto& c : r) {
                c = rng.box();
                nrm2 += std::norm(c);
            }
            if (nrm2 == 0.0) r[0] = 1.0, nrm2 = 1.0;
            if (coeffs.size() < r.size()) coeffs.resize(r.size(), 0.0);
            for (std::size_t j = 0; j < r.size(); ++j) coeffs[j] += r[j] / std::sqrt(nrm2);
            any = true;
        } else if (kind == "phase") {
            if (parts.size() != 2) throw usage_error("signal: phase term needs a value, got '" + term + "'");
            phase *= std::polar(1.0, TWO_PI * to_double(parts[1], "signal"));
        } else {
            throw usage_error("signal: unknown term '" + term + "' (use hermite:, random:, phase:)");
        }
    }
    if (!any) throw usage_error("signal: no basis terms in '" + expr + "'");
    Signal f = stft::hermite_synthesize(coeffs, g);
    for (auto& v : f.values) v *= phase;
    return f;
}

// Window grammar: gaussian[:gamma] | hermite:n.
windows::WindowSpec parse_window(const std::string& s) {
    auto parts = split(s, ':');
    if (parts[0] == "gaussian") {
        if (parts.size() > 2) throw usage_error("window: gaussian takes at most one parameter");
        double gamma = parts.size() > 1 ? to_double(parts[1], "window") : PI;
        return windows::WindowSpec::gaussian(gamma);
    }
    if (parts[0] == "hermite") {
        if (parts.size() != 2) throw usage_error("window: hermite needs an order");
        std::int64_t n = to_int(parts[1], "window");
        if (n < 0) throw usage_error("window: hermite order must be >= 0");
        return windows::WindowSpec::hermite(static_cast<int>(n));
    }
    throw usage_error("window: unknown spec '" + s + "' (use gaussian[:gamma] or hermite:n)");
}

// Lattice grammar: rect[:alpha] | rotate:theta | shear:sigma | als.
// For rotate/shear the lattice is alpha S (sqrt Z)^2; rect:a overrides alpha.
lattices::PointSet lattice_from_spec(const std::string& spec, double alpha, double radius,
                                     std::int64_t nmax) {
    auto parts = split(spec, ':');
    const std::string& name = parts[0];
    if (name == "als") {
        if (parts.size() != 1) throw usage_error("lattice: als takes no parameter (use --nmax)");
        return lattices::als_preset(nmax);
    }
    if (name == "rect") {
        if (parts.size() > 2) throw usage_error("lattice: rect takes at most one parameter");
        double a = parts.size() > 1 ? to_double(parts[1], "lattice") : alpha;
        return lattices::generate(lattices::diagonal_lattice({a, a}, radius));
    }
    if (name == "rotate" || name == "shear") {
        if (parts.size() != 2) throw usage_error("lattice: " + name + " needs a parameter");
        double p = to_double(parts[1], "lattice");
        auto S = name == "rotate" ? lattices::rotation(p) : lattices::shear(p);
        return lattices::generate(lattices::scaled_lattice(S, alpha, radius));
    }
    throw usage_error("lattice: unknown preset '" + spec + "' (use rect[:a], rotate:t, shear:s, als)");
}

std::string timestamp_line(std::chrono::steady_clock::time_point started) {
    double runtime =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char when[32];
    std::strftime(when, sizeof when, "%Y-%m-%dT%H:%M:%SZ", &tm);
    char line[96];
    std::snprintf(line, sizeof line, "generated_at=%s runtime_s=%.3f", when, runtime);
    return line;
}

// All volatile data (wall-clock time and runtime) lives in the single-line
// "timestamp" value, so reports from identical runs differ in one line only.
io::Json base_report(const std::string& command, io::Json config,
                     std::chrono::steady_clock::time_point started) {
    auto rep = io::Json::object();
    rep.set("command", io::Json::str(command));
    rep.set("version", io::Json::str(VERSION));
    rep.set("config", std::move(config));
    rep.set("timestamp", io::Json::str(timestamp_line(started)));
    return rep;
}

// Output policy: with --out the artifact goes to the file and the JSON report
// to stdout; without it the artifact itself goes to stdout. For format json
// the report (with embedded data) is the artifact.
void emit(io::Json& report, const std::string& csv, const std::string& format,
          const std::string& out) {
    if (!out.empty()) {
        report.set("artifact", io::Json::str(out));
        io::atomic_write(out, format == "csv" ? csv : report.dump());
        std::fputs(report.dump().c_str(), stdout);
    } else if (format == "csv") {
        std::fputs(csv.c_str(), stdout);
    } else {
        std::fputs(report.dump().c_str(), stdout);
    }
}

io::Json complex_json(cplx z) {
    auto pair = io::Json::array();
    pair.push(io::Json::number(z.real()));
    pair.push(io::Json::number(z.imag()));
    return pair;
}

io::Json point_rows_json(const lattices::PointSet& ps) {
    auto rows = io::Json::array();
    for (const auto& p : ps.points) {
        auto row = io::Json::array();
        for (double c : p.coords) row.push(io::Json::number(c));
        for (std::size_t j = 0; j < ps.dim; ++j) {
            if (j < p.indices.size()) {
                row.push(io::Json::integer(p.indices[j].n));
                row.push(io::Json::integer(p.indices[j].sign));
            } else {
                row.push(io::Json::integer(-1));
                row.push(io::Json::integer(0));
            }
        }
        rows.push(std::move(row));
    }
    return rows;
}

// Parse "re[:im]" comma-separated complex lists.
std::vector<cplx> parse_complex_list(const std::string& s, const std::string& what) {
    std::vector<cplx> out;
    if (s.empty()) return out;
    for (const auto& item : split(s, ',')) {
        auto parts = split(item, ':');
        if (parts.size() > 2) throw usage_error(what + ": item '" + item + "' is not re[:im]");
        double re = to_double(parts[0], what);
        double im = parts.size() > 1 ? to_double(parts[1], what) : 0.0;
        out.emplace_back(re, im);
    }
    return out;
}

struct CommonOpts {
    std::uint64_t seed = 0;
    std::string out;
    std::string format;  // resolved to the per-command default when empty
    double halfwidth = 8.0;
    std::size_t gridn = 1024;

    GridSpec grid() const { return centered_grid(halfwidth, gridn); }

    std::string resolve_format(const std::string& fallback, bool csv_allowed) const {
        std::string f = format.empty() ? fallback : format;
        if (f == "csv" && !csv_allowed)
            throw usage_error("--format csv is not available for this command");
        return f;
    }
};

void set_common_config(io::Json& cfg, const CommonOpts& c, const std::string& format) {
    cfg.set("seed", io::Json::integer(static_cast<std::int64_t>(c.seed)));
    cfg.set("format", io::Json::str(format));
    cfg.set("halfwidth", io::Json::number(c.halfwidth));
    cfg.set("gridn", io::Json::integer(static_cast<std::int64_t>(c.gridn)));
}

int run(int argc, char** argv) {
    auto started = std::chrono::steady_clock::now();

    CLI::App app{"phaseless STFT sampling on square-root lattices"};
    app.require_subcommand(1);
    // Long-only help: distinguish takes --f/--h, and a short -h would swallow
    // the latter (inherited by every subcommand added below).
    app.set_help_flag("--help", "print this help and exit");

    CommonOpts common;
    app.add_option("--seed", common.seed, "seed for every random draw (default 0)");
    app.add_option("--out", common.out, "write the artifact here; the JSON report goes to stdout");
    app.add_option("--format", common.format, "artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--halfwidth", common.halfwidth, "signal grid covers [-halfwidth, halfwidth)");
    app.add_option("--gridn", common.gridn, "signal grid point count");

    // lattice
    auto* lattice_cmd = app.add_subcommand("lattice", "emit square-root lattice points");
    std::string lat_matrix, lat_preset;
    double lat_alpha = 1.0, lat_radius = 3.0;
    std::int64_t lat_nmax = 10;
    lattice_cmd->fallthrough();
    lattice_cmd->add_option("--matrix", lat_matrix, "generating matrix: I or a,b,c,d (row-major)");
    lattice_cmd->add_option("--preset", lat_preset, "rect[:a] | rotate:theta | shear:sigma | als");
    lattice_cmd->add_option("--alpha", lat_alpha, "scale factor for the generating matrix");
    lattice_cmd->add_option("--radius", lat_radius, "truncation radius");
    lattice_cmd->add_option("--nmax", lat_nmax, "arm truncation index for the als preset");

    // thresholds
    auto* thr_cmd = app.add_subcommand("thresholds", "admissible spacing bounds");
    std::string thr_preset = "rect";
    double thr_gamma = PI, thr_a = 0.0, thr_b = 0.0;
    thr_cmd->fallthrough();
    thr_cmd->add_option("--preset", thr_preset, "rect | rotate:theta | shear:sigma");
    thr_cmd->add_option("--gamma", thr_gamma, "Gaussian window decay rate (rect preset)");
    thr_cmd->add_option("--enva", thr_a, "envelope real-axis rate (rect preset, with --envb)");
    thr_cmd->add_option("--envb", thr_b, "envelope imaginary-axis rate");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "phaseless STFT samples on a lattice");
    std::string smp_signal = "hermite:0", smp_window = "gaussian", smp_lattice = "rect:0.24";
    double smp_alpha = 1.0, smp_radius = 4.0;
    std::int64_t smp_nmax = 10;
    sample_cmd->fallthrough();
    sample_cmd->add_option("--signal", smp_signal, "signal expression");
    sample_cmd->add_option("--window", smp_window, "window spec");
    sample_cmd->add_option("--lattice", smp_lattice, "lattice preset");
    sample_cmd->add_option("--alpha", smp_alpha, "lattice scale (rotate/shear presets)");
    sample_cmd->add_option("--radius", smp_radius, "lattice truncation radius");
    sample_cmd->add_option("--nmax", smp_nmax, "als arm truncation");

    // distinguish
    auto* dst_cmd = app.add_subcommand("distinguish", "compare |STFT| of two signals on a lattice");
    std::string dst_f = "hermite:0", dst_h = "hermite:1", dst_window = "gaussian",
                dst_lattice = "rect:0.24";
    double dst_alpha = 1.0, dst_radius = 4.0;
    std::int64_t dst_nmax = 10;
    dst_cmd->fallthrough();
    dst_cmd->add_option("--f", dst_f, "first signal expression");
    dst_cmd->add_option("--h", dst_h, "second signal expression");
    dst_cmd->add_option("--window", dst_window, "window spec");
    dst_cmd->add_option("--lattice", dst_lattice, "lattice preset");
    dst_cmd->add_option("--alpha", dst_alpha, "lattice scale");
    dst_cmd->add_option("--radius", dst_radius, "lattice truncation radius");
    dst_cmd->add_option("--nmax", dst_nmax, "als arm truncation");

    // reconstruct
    auto* rec_cmd = app.add_subcommand("reconstruct", "spectrogram round trip up to global phase");
    std::string rec_signal = "hermite:0", rec_window = "gaussian";
    double rec_eps = 1e-8;
    rec_cmd->fallthrough();
    rec_cmd->add_option("--signal", rec_signal, "signal expression");
    rec_cmd->add_option("--window", rec_window, "window spec");
    rec_cmd->add_option("--eps", rec_eps, "deconvolution cutoff, relative to the peak");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "recover a signal from its phaseless samples");
    std::string fit_truth = "hermite:0", fit_window = "gaussian", fit_lattice = "rect:0.24";
    double fit_alpha = 1.0, fit_radius = 4.0, fit_tol = 1e-9;
    std::int64_t fit_nmax = 10, fit_nbasis = 4, fit_restarts = 8, fit_maxiters = 400;
    fit_cmd->fallthrough();
    fit_cmd->add_option("--truth", fit_truth, "signal to sample and recover");
    fit_cmd->add_option("--window", fit_window, "window spec");
    fit_cmd->add_option("--lattice", fit_lattice, "lattice preset");
    fit_cmd->add_option("--alpha", fit_alpha, "lattice scale");
    fit_cmd->add_option("--radius", fit_radius, "lattice truncation radius");
    fit_cmd->add_option("--nmax", fit_nmax, "als arm truncation");
    fit_cmd->add_option("--nbasis", fit_nbasis, "Hermite coefficients to fit");
    fit_cmd->add_option("--restarts", fit_restarts, "random multi-start count");
    fit_cmd->add_option("--maxiters", fit_maxiters, "descent iteration cap per restart");
    fit_cmd->add_option("--tol", fit_tol, "gradient-norm stopping tolerance");

    // counterexample
    auto* cex_cmd = app.add_subcommand("counterexample", "sparse-lattice non-uniqueness witness");
    double cex_beta = 2.0, cex_b = 1.0, cex_disk = 5.0;
    std::int64_t cex_kmax = 500, cex_K = 1;
    cex_cmd->fallthrough();
    cex_cmd->add_option("--beta", cex_beta, "zero spacing lambda(k) = beta sqrt(k)");
    cex_cmd->add_option("--b", cex_b, "growth-class rate e^{b |z|^2}");
    cex_cmd->add_option("--kmax", cex_kmax, "product truncation index");
    cex_cmd->add_option("--K", cex_K, "first quartic factor index");
    cex_cmd->add_option("--disk", cex_disk, "evaluation disk radius");

    // jensen
    auto* jen_cmd = app.add_subcommand("jensen", "Jensen-formula consistency check");
    std::string jen_coeffs, jen_zeros;
    bool jen_cex = false;
    double jen_r = 2.0, jen_beta = 2.0, jen_b = 1.0, jen_disk = 5.0;
    std::int64_t jen_kmax = 500, jen_K = 1, jen_ntheta = 4096;
    jen_cmd->fallthrough();
    jen_cmd->add_option("--coeffs", jen_coeffs, "polynomial coefficients re[:im],... ascending");
    jen_cmd->add_option("--zeros", jen_zeros, "all polynomial zeros re[:im],... (omit only when none)");
    jen_cmd->add_flag("--counterexample", jen_cex, "check the counterexample product instead");
    jen_cmd->add_option("--r", jen_r, "circle radius");
    jen_cmd->add_option("--ntheta", jen_ntheta, "angular quadrature points");
    jen_cmd->add_option("--beta", jen_beta, "counterexample zero spacing");
    jen_cmd->add_option("--b", jen_b, "counterexample growth rate");
    jen_cmd->add_option("--kmax", jen_kmax, "counterexample truncation");
    jen_cmd->add_option("--K", jen_K, "counterexample quartic split");
    jen_cmd->add_option("--disk", jen_disk, "counterexample disk radius");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (lattice_cmd->parsed()) {
        std::string format = common.resolve_format("csv", true);
        if (lat_matrix.empty() == lat_preset.empty())
            throw usage_error("lattice: give exactly one of --matrix and --preset");
        lattices::PointSet ps;
        if (!lat_matrix.empty()) {
            std::vector<double> entries;
            if (lat_matrix == "I") {
                entries = {1.0, 0.0, 0.0, 1.0};
            } else {
                for (const auto& item : split(lat_matrix, ','))
                    entries.push_back(to_double(item, "lattice"));
                if (entries.size() != 4)
                    throw usage_error("lattice: --matrix needs I or four entries a,b,c,d");
            }
            for (auto& e : entries) e *= lat_alpha;
            ps = lattices::generate(lattices::SqrtLattice{entries, 2, lat_radius});
        } else {
            ps = lattice_from_spec(lat_preset, lat_alpha, lat_radius, lat_nmax);
        }

        auto cfg = io::Json::object();
        cfg.set("matrix", io::Json::str(lat_matrix));
        cfg.set("preset", io::Json::str(lat_preset));
        cfg.set("alpha", io::Json::number(lat_alpha));
        cfg.set("radius", io::Json::number(lat_radius));
        cfg.set("nmax", io::Json::integer(lat_nmax));
        set_common_config(cfg, common, format);
        auto rep = base_report("lattice", std::move(cfg), started);
        rep.set("n_points", io::Json::integer(static_cast<std::int64_t>(ps.points.size())));
        if (format == "json") rep.set("points", point_rows_json(ps));
        emit(rep, io::point_set_csv(ps), format, common.out);
        return 0;
    }

    if (thr_cmd->parsed()) {
        std::string format = common.resolve_format("json", false);
        auto parts = split(thr_preset, ':');
        auto rules = io::Json::array();
        auto cfg = io::Json::object();
        cfg.set("preset", io::Json::str(thr_preset));
        double alpha_max = 0.0;
        bool differ = false;
        double boundary = 0.0;
        if (parts[0] == "rect") {
            lattices::ThresholdReport rep =
                (thr_a > 0.0 && thr_b > 0.0)
                    ? lattices::rect_thresholds(windows::envelope(thr_a, thr_b))
                    : lattices::gaussian_thresholds(thr_gamma);
            cfg.set("gamma", io::Json::number(thr_gamma));
            if (thr_a > 0.0) cfg.set("enva", io::Json::number(thr_a));
            if (thr_b > 0.0) cfg.set("envb", io::Json::number(thr_b));
            alpha_max = rep.tau_max[0];
            for (double v : rep.tau_max) alpha_max = std::min(alpha_max, v);
            for (double v : rep.nu_max) alpha_max = std::min(alpha_max, v);
            rules.push(io::threshold_json(rep));
        } else if (parts[0] == "rotate" || parts[0] == "shear") {
            if (parts.size() != 2) throw usage_error("thresholds: " + parts[0] + " needs a parameter");
            double p = to_double(parts[1], "thresholds");
            auto S = parts[0] == "rotate" ? lattices::rotation(p) : lattices::shear(p);
            auto cons = lattices::sl2_threshold(S, lattices::ThresholdRule::sl2_conservative);
            auto prin = lattices::sl2_threshold(S, lattices::ThresholdRule::sl2_printed);
            rules.push(io::threshold_json(cons));
            rules.push(io::threshold_json(prin));
            alpha_max = cons.admissible ? cons.tau_max[0] : 0.0;
            differ = cons.admissible && prin.admissible &&
                     std::abs(cons.tau_max[0] - prin.tau_max[0]) > 1e-12 * cons.tau_max[0];
            if (parts[0] == "shear") boundary = lattices::shear_admissible_root();
        } else {
            throw usage_error("thresholds: unknown preset '" + thr_preset + "'");
        }
        set_common_config(cfg, common, format);
        auto rep = base_report("thresholds", std::move(cfg), started);
        rep.set("rules", std::move(rules));
        rep.set("alpha_max", io::Json::number(alpha_max));
        rep.set("variants_differ", io::Json::boolean(differ));
        if (boundary > 0.0) rep.set("shear_boundary_root", io::Json::number(boundary));
        emit(rep, "", format, common.out);
        return 0;
    }

    if (sample_cmd->parsed()) {
        std::string format = common.resolve_format("csv", true);
        Rng rng(common.seed);
        Signal f = parse_signal_expr(smp_signal, common.grid(), rng);
        auto w = parse_window(smp_window);
        auto pts = lattice_from_spec(smp_lattice, smp_alpha, smp_radius, smp_nmax);
        auto samples = stft::sample_phaseless(f, w, pts);

        auto cfg = io::Json::object();
        cfg.set("signal", io::Json::str(smp_signal));
        cfg.set("window", io::Json::str(smp_window));
        cfg.set("lattice", io::Json::str(smp_lattice));
        cfg.set("alpha", io::Json::number(smp_alpha));
        cfg.set("radius", io::Json::number(smp_radius));
        cfg.set("nmax", io::Json::integer(smp_nmax));
        set_common_config(cfg, common, format);
        auto rep = base_report("sample", std::move(cfg), started);
        rep.set("n_samples", io::Json::integer(static_cast<std::int64_t>(samples.magnitudes.size())));
        double peak = 0.0;
        for (double m : samples.magnitudes) peak = std::max(peak, m);
        rep.set("peak_magnitude", io::Json::number(peak));
        if (format == "json") {
            auto rows = io::Json::array();
            for (std::size_t i = 0; i < samples.magnitudes.size(); ++i) {
                auto row = io::Json::array();
                row.push(io::Json::number(samples.points.points[i].coords[0]));
                row.push(io::Json::number(samples.points.points[i].coords[1]));
                row.push(io::Json::number(samples.magnitudes[i]));
                rows.push(std::move(row));
            }
            rep.set("samples", std::move(rows));
        }
        emit(rep, io::sample_set_csv(samples), format, common.out);
        return 0;
    }

    if (dst_cmd->parsed()) {
        std::string format = common.resolve_format("json", false);
        Rng rng(common.seed);
        Signal f = parse_signal_expr(dst_f, common.grid(), rng);
        Signal h = parse_signal_expr(dst_h, common.grid(), rng);
        auto w = parse_window(dst_window);
        auto pts = lattice_from_spec(dst_lattice, dst_alpha, dst_radius, dst_nmax);
        auto res = retrieval::distinguish(f, h, w, pts);

        auto cfg = io::Json::object();
        cfg.set("f", io::Json::str(dst_f));
        cfg.set("h", io::Json::str(dst_h));
        cfg.set("window", io::Json::str(dst_window));
        cfg.set("lattice", io::Json::str(dst_lattice));
        cfg.set("alpha", io::Json::number(dst_alpha));
        cfg.set("radius", io::Json::number(dst_radius));
        cfg.set("nmax", io::Json::integer(dst_nmax));
        set_common_config(cfg, common, format);
        auto rep = base_report("distinguish", std::move(cfg), started);
        rep.set("result", io::distinguish_json(res));
        rep.set("n_points", io::Json::integer(static_cast<std::int64_t>(pts.points.size())));
        emit(rep, "", format, common.out);
        return 0;
    }

    if (rec_cmd->parsed()) {
        std::string format = common.resolve_format("json", false);
        Rng rng(common.seed);
        Signal f = parse_signal_expr(rec_signal, common.grid(), rng);
        auto w = parse_window(rec_window);
        Signal g = retrieval::reconstruct(f, w, rec_eps);
        auto align = retrieval::phase_align(f, g);

        auto cfg = io::Json::object();
        cfg.set("signal", io::Json::str(rec_signal));
        cfg.set("window", io::Json::str(rec_window));
        cfg.set("eps", io::Json::number(rec_eps));
        set_common_config(cfg, common, format);
        auto rep = base_report("reconstruct", std::move(cfg), started);
        rep.set("aligned_error", io::Json::number(align.err));
        rep.set("tau", complex_json(align.tau));
        rep.set("input_norm", io::Json::number(norm_l2(f)));
        rep.set("output_norm", io::Json::number(norm_l2(g)));
        rep.set("signal", io::signal_json(g));
        emit(rep, "", format, common.out);
        return 0;
    }

    if (fit_cmd->parsed()) {
        std::string format = common.resolve_format("json", false);
        Rng rng(common.seed);
        Signal truth = parse_signal_expr(fit_truth, common.grid(), rng);
        auto w = parse_window(fit_window);
        auto pts = lattice_from_spec(fit_lattice, fit_alpha, fit_radius, fit_nmax);
        auto samples = stft::sample_phaseless(truth, w, pts);
        retrieval::FitConfig fc;
        fc.n_basis = static_cast<int>(fit_nbasis);
        fc.restarts = static_cast<int>(fit_restarts);
        fc.max_iters = static_cast<int>(fit_maxiters);
        fc.tol = fit_tol;
        fc.seed = common.seed;
        fc.grid = common.grid();
        auto res = retrieval::fit_from_samples(samples, w, fc, &truth);

        auto cfg = io::Json::object();
        cfg.set("truth", io::Json::str(fit_truth));
        cfg.set("window", io::Json::str(fit_window));
        cfg.set("lattice", io::Json::str(fit_lattice));
        cfg.set("alpha", io::Json::number(fit_alpha));
        cfg.set("radius", io::Json::number(fit_radius));
        cfg.set("nmax", io::Json::integer(fit_nmax));
        cfg.set("nbasis", io::Json::integer(fit_nbasis));
        cfg.set("restarts", io::Json::integer(fit_restarts));
        cfg.set("maxiters", io::Json::integer(fit_maxiters));
        cfg.set("tol", io::Json::number(fit_tol));
        set_common_config(cfg, common, format);
        auto rep = base_report("fit", std::move(cfg), started);
        rep.set("result", io::fit_json(res));
        rep.set("n_samples", io::Json::integer(static_cast<std::int64_t>(samples.magnitudes.size())));
        emit(rep, "", format, common.out);
        return 0;
    }

    if (cex_cmd->parsed()) {
        std::string format = common.resolve_format("csv", true);
        analysis::SqrtSequence seq{cex_beta, cex_K};
        auto F = analysis::counterexample_build(seq, cex_b, cex_kmax, cex_disk);

        std::int64_t kcap = std::min<std::int64_t>(cex_kmax, 100);
        std::vector<io::CounterexampleRow> rows;
        auto probe = [&](cplx z) {
            cplx v = F.eval(z);
            rows.push_back({z, v, std::abs(v) * std::exp(-cex_b * std::norm(z))});
        };
        probe(0.0);
        double max_zero_residual = 0.0;
        for (std::int64_t k = 1; k <= kcap; ++k) {
            double lam = seq.lambda(k);
            probe(cplx(lam, 0.0));
            max_zero_residual = std::max(max_zero_residual, std::abs(rows.back().value));
            probe(cplx(-lam, 0.0));
            max_zero_residual = std::max(max_zero_residual, std::abs(rows.back().value));
        }
        double min_midpoint = std::numeric_limits<double>::infinity();
        for (std::int64_t k = 1; k < kcap; ++k) {
            probe(cplx(0.5 * (seq.lambda(k) + seq.lambda(k + 1)), 0.0));
            min_midpoint = std::min(min_midpoint, std::abs(rows.back().value));
        }
        const std::size_t n_sweep = 257;
        for (std::size_t j = 0; j < n_sweep; ++j)
            probe(cplx(-cex_disk + 2.0 * cex_disk * static_cast<double>(j) / (n_sweep - 1), 0.0));

        // Envelope-ratio sup over the disk: radial grid of circle maxima.
        double sup_ratio = std::abs(F.eval(0.0));
        const std::size_t n_radii = 48;
        for (std::size_t j = 1; j <= n_radii; ++j) {
            double r = cex_disk * static_cast<double>(j) / n_radii;
            sup_ratio = std::max(sup_ratio,
                                 analysis::max_modulus(F, r, 768) * std::exp(-cex_b * r * r));
        }

        auto cfg = io::Json::object();
        cfg.set("beta", io::Json::number(cex_beta));
        cfg.set("b", io::Json::number(cex_b));
        cfg.set("kmax", io::Json::integer(cex_kmax));
        cfg.set("K", io::Json::integer(cex_K));
        cfg.set("disk", io::Json::number(cex_disk));
        set_common_config(cfg, common, format);
        auto rep = base_report("counterexample", std::move(cfg), started);
        rep.set("value_at_zero", io::Json::number(std::abs(F.eval(0.0))));
        rep.set("max_zero_residual", io::Json::number(max_zero_residual));
        rep.set("probed_zeros", io::Json::integer(kcap));
        rep.set("min_midpoint_abs", io::Json::number(min_midpoint));
        rep.set("disk_sup_ratio", io::Json::number(sup_ratio));
        rep.set("tail_log_bound", io::Json::number(F.tail_log_bound));
        rep.set("density_verdict",
                io::Json::str(analysis::to_string(analysis::density_classify(seq, cex_b))));
        if (format == "json") {
            auto rj = io::Json::array();
            for (const auto& row : rows) {
                auto r = io::Json::array();
                r.push(io::Json::number(row.z.real()));
                r.push(io::Json::number(row.z.imag()));
                r.push(io::Json::number(row.value.real()));
                r.push(io::Json::number(row.value.imag()));
                r.push(io::Json::number(row.envelope_ratio));
                rj.push(std::move(r));
            }
            rep.set("rows", std::move(rj));
        }
        emit(rep, io::counterexample_csv(rows), format, common.out);
        return 0;
    }

    if (jen_cmd->parsed()) {
        std::string format = common.resolve_format("json", false);
        if (jen_cex == !jen_coeffs.empty())
            throw usage_error("jensen: give either --coeffs or --counterexample");
        analysis::EntireEval F;
        auto cfg = io::Json::object();
        if (jen_cex) {
            analysis::SqrtSequence seq{jen_beta, jen_K};
            F = analysis::counterexample_build(seq, jen_b, jen_kmax, jen_disk);
            cfg.set("mode", io::Json::str("counterexample"));
            cfg.set("beta", io::Json::number(jen_beta));
            cfg.set("b", io::Json::number(jen_b));
            cfg.set("kmax", io::Json::integer(jen_kmax));
            cfg.set("K", io::Json::integer(jen_K));
            cfg.set("disk", io::Json::number(jen_disk));
        } else {
            auto coeffs = parse_complex_list(jen_coeffs, "jensen coeffs");
            auto zeros = parse_complex_list(jen_zeros, "jensen zeros");
            F.eval = [coeffs](cplx z) {
                cplx acc = 0.0;
                for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * z + coeffs[j];
                return acc;
            };
            F.zeros = zeros;
            cfg.set("mode", io::Json::str("poly"));
            cfg.set("coeffs", io::Json::str(jen_coeffs));
            cfg.set("zeros", io::Json::str(jen_zeros));
        }
        auto res = analysis::jensen_check(F, jen_r, static_cast<std::size_t>(jen_ntheta));
        std::int64_t inside = 0;
        for (const auto& z : *F.zeros)
            if (std::abs(z) < jen_r) ++inside;

        cfg.set("r", io::Json::number(jen_r));
        cfg.set("ntheta", io::Json::integer(jen_ntheta));
        set_common_config(cfg, common, format);
        auto rep = base_report("jensen", std::move(cfg), started);
        rep.set("lhs", io::Json::number(res.lhs));
        rep.set("rhs", io::Json::number(res.rhs));
        rep.set("gap", io::Json::number(res.gap));
        rep.set("n_zeros_inside", io::Json::integer(inside));
        emit(rep, "", format, common.out);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const usage_error& e) {
        std::fprintf(stderr, "phaseless: %s\n", e.what());
        return 1;
    } catch (const phaseless::precondition_error& e) {
        std::fprintf(stderr, "phaseless: %s\n", e.what());
        return 2;
    } catch (const phaseless::numeric_error& e) {
        std::fprintf(stderr, "phaseless: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "phaseless: unexpected failure: %s\n", e.what());
        return 3;
    }
}
