#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "phi4/cli.hpp"
#include "phi4/dynamics.hpp"
#include "phi4/field_io.hpp"
#include "phi4/observables.hpp"
#include "phi4/paraproduct.hpp"
#include "phi4/powercount.hpp"
#include "phi4/renorm.hpp"
#include "phi4/trees.hpp"

namespace phi4::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

using Defaults = std::vector<std::pair<std::string, std::string>>;

std::string two_pi() {
    std::ostringstream os;
    os.precision(17);
    os << 2.0 * std::numbers::pi;
    return os.str();
}

Defaults sim_defaults() {
    return {{"dim", "3"},           {"n", "32"},           {"period", two_pi()},  {"r", "0.05"},
            {"dt", "0.005"},        {"horizon", "1"},      {"coupling", "1"},     {"mass_term", "true"},
            {"log_term", "true"},   {"noise", "true"},     {"seed", "1"},         {"stream", "0"},
            {"initial", "zero"},    {"initial_size", "1"}, {"initial_file", ""},  {"epsilon", "0.05"},
            {"blowup_threshold", "1e6"}, {"snapshot_stride", "0.1"}, {"integrator", "euler"}};
}

Defaults with(Defaults base, const Defaults& extra) {
    for (const auto& [k, v] : extra) {
        bool replaced = false;
        for (auto& d : base) {
            if (d.first == k) d.second = v, replaced = true;
        }
        if (!replaced) base.emplace_back(k, v);
    }
    return base;
}

SimConfig sim_config(const Params& p) {
    SimConfig c;
    c.dim = static_cast<int>(p.integer("dim"));
    c.n = static_cast<int>(p.integer("n"));
    c.period = p.real("period");
    c.r = p.real("r");
    c.dt = p.real("dt");
    c.horizon = p.real("horizon");
    c.coupling = p.real("coupling");
    c.mass_term = p.boolean("mass_term");
    c.log_term = p.boolean("log_term");
    c.noise = p.boolean("noise");
    c.seed = p.unsigned_integer("seed");
    c.stream = static_cast<std::uint32_t>(p.unsigned_integer("stream"));
    c.initial.size = p.real("initial_size");
    c.initial.epsilon = p.real("epsilon");
    c.blowup_threshold = p.real("blowup_threshold");
    c.snapshot_stride = p.real("snapshot_stride");
    const std::string init = p.str("initial");
    if (init == "zero") {
        c.initial.kind = InitialCondition::Kind::Zero;
    } else if (init == "random") {
        c.initial.kind = InitialCondition::Kind::ScaledRandom;
    } else if (init == "file") {
        c.initial.kind = InitialCondition::Kind::Given;
        c.initial.field = load_field(p.str("initial_file")).field;
    } else {
        throw ConfigError("parameter 'initial' must be zero, random or file");
    }
    const std::string integ = p.str("integrator");
    if (integ == "euler") c.integrator = Integrator::ExponentialEuler;
    else if (integ == "split") c.integrator = Integrator::SplitCubic;
    else throw ConfigError("parameter 'integrator' must be euler or split");
    c.validate();
    return c;
}

// Output directory plus the list of files written into it.
struct Output {
    fs::path dir;
    std::vector<std::string> files;

    fs::path add(const std::string& name) {
        files.push_back(name);
        return dir / name;
    }
    void text(const std::string& name, const std::string& body) {
        std::ofstream f(add(name));
        if (!f) throw IoError("cannot write '" + (dir / name).string() + "'");
        f << body;
        if (!f) throw IoError("write failed for '" + (dir / name).string() + "'");
    }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

// --- subcommands -------------------------------------------------------------

void cmd_simulate(const Params& p, Output& out) {
    const SimConfig c = sim_config(p);
    const Trajectory tr = simulate(c);
    out.text("diagnostics.csv", tr.diagnostics_csv());
    if (p.boolean("checkpoints")) {
        for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
            std::ostringstream name;
            name << "u_" << std::setw(5) << std::setfill('0') << i << ".phi4";
            try {
                save_field(out.add(name.str()).string(), tr.snapshots[i], "u");
            } catch (const std::exception& e) {
                throw IoError(e.what());
            }
        }
    }
    std::cout << "simulated " << tr.times.size() << " records to t = " << tr.times.back() << "\n";
}

TreeOptions tree_options(const Params& p) {
    TreeOptions o;
    o.r = p.real("r");
    o.dt = p.real("dt");
    o.burn_in = p.real("burn_in");
    o.burn_in_dt = p.real("burn_in_dt");
    o.settle = p.real("settle");
    return o;
}

Grid tree_grid(const Params& p) {
    const int n = static_cast<int>(p.integer("n"));
    const int d = static_cast<int>(p.integer("dim"));
    if (d < 1 || d > 3 || n < 4 || (n & (n - 1)) != 0) throw ConfigError("dim must be 1..3 and n a power of two >= 4");
    return Grid(d, n, p.real("period"));
}

void cmd_trees(const Params& p, Output& out) {
    const Grid g = tree_grid(p);
    const NoiseStream stream(p.unsigned_integer("seed"), static_cast<std::uint32_t>(p.unsigned_integer("stream")));
    const std::string sweep = p.str("r_sweep");
    if (!sweep.empty()) {
        SweepOptions so;
        so.trees = tree_options(p);
        so.snapshots = static_cast<int>(p.integer("snapshots"));
        so.stride = p.real("stride");
        const auto rep = tree_divergence_report(g, stream, p.reals("r_sweep"), so);
        out.text("divergence.csv", rep.csv());
        out.text("divergence_fits.csv", rep.fits_csv());
        std::cout << rep.fits_csv();
        return;
    }
    const auto snaps = build_enhanced_noise(stream, g, tree_options(p), static_cast<int>(p.integer("snapshots")),
                                            p.real("stride"));
    std::ostringstream means;
    means.precision(10);
    means << "snapshot,component,mean,besov_m1.1\n";
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        std::ostringstream prefix;
        prefix << "trees_" << std::setw(4) << std::setfill('0') << i;
        std::vector<std::string> written;
        try {
            written = save_snapshot(snaps[i], out.dir.string(), prefix.str());
        } catch (const std::exception& e) {
            throw IoError(e.what());
        }
        for (const auto& w : written) out.files.push_back(fs::path(w).filename().string());
        for (const auto& [tag, f] : snaps[i].components()) {
            means << i << ',' << tag << ',' << f->mean() << ',' << besov_norm(*f, -1.1, kInfinity, kInfinity) << '\n';
        }
    }
    out.text("tree_means.csv", means.str());
    std::cout << "wrote " << snaps.size() << " snapshot(s)\n";
}

std::vector<double> log_range(const std::string& text) {
    const auto a = text.find(':');
    const auto b = text.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos) throw ConfigError("r range must look like lo:hi:count");
    char* end = nullptr;
    const std::string s_lo = text.substr(0, a), s_hi = text.substr(a + 1, b - a - 1), s_n = text.substr(b + 1);
    const double lo = std::strtod(s_lo.c_str(), &end);
    if (*end) throw ConfigError("bad lower end in '" + text + "'");
    const double hi = std::strtod(s_hi.c_str(), &end);
    if (*end) throw ConfigError("bad upper end in '" + text + "'");
    const long n = std::strtol(s_n.c_str(), &end, 10);
    if (*end || n < 1 || !(lo > 0.0) || !(hi >= lo)) throw ConfigError("r range '" + text + "' is invalid");
    std::vector<double> r;
    for (long i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        r.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
    }
    return r;
}

void cmd_renorm(const Params& p, Output& out) {
    const int dim = static_cast<int>(p.integer("dim"));
    const double period = p.real("period");
    std::ostringstream csv;
    csv.precision(12);
    csv << "r,a_closed,a_numeric,b_closed,b_numeric\n";
    for (double r : log_range(p.str("r"))) {
        const Grid g(dim, minimal_resolution(dim, period, r), period);
        csv << r << ',' << a_closed(r) << ',' << a_numeric(g, r) << ',' << b_closed(r) << ',' << b_numeric(r) << '\n';
    }
    out.text("renorm_constants.csv", csv.str());
    std::cout << csv.str();
}

void cmd_powercount(const Params& p, Output& out) {
    const std::string path = p.str("file");
    if (path.empty()) throw ConfigError("powercount needs --file");
    std::ifstream in(path);
    if (!in) throw IoError("cannot open graph file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const auto g = pc::parse_graph(ss.str());
    const auto range = pc::gamma_range(g);
    const std::string table = pc::report_table(g, range);
    const std::string json = pc::report_json(g, range);
    out.text("powercount.txt", table);
    out.text("powercount.json", json);
    std::cout << (p.boolean("json") ? json + "\n" : table);
}

void cmd_regularity(const Params& p, Output& out) {
    std::vector<Field> samples;
    const std::string files = p.str("files");
    if (!files.empty()) {
        std::stringstream ss(files);
        std::string f;
        while (std::getline(ss, f, ',')) {
            try {
                samples.push_back(load_field(f).field);
            } catch (const std::exception& e) {
                throw IoError(e.what());
            }
        }
    } else {
        const Grid g = tree_grid(p);
        TreeBuilder b(g, NoiseStream(p.unsigned_integer("seed"), static_cast<std::uint32_t>(p.unsigned_integer("stream"))),
                      tree_options(p));
        const std::string comp = p.str("component");
        const int count = static_cast<int>(p.integer("snapshots"));
        for (int i = 0; i < count; ++i) {
            if (i > 0) b.advance(p.real("stride"));
            if (comp == "X") samples.push_back(b.X());
            else if (comp == "W2") samples.push_back(b.W2());
            else if (comp == "W3") samples.push_back(b.W3());
            else if (comp == "I2") samples.push_back(b.I2());
            else if (comp == "I3") samples.push_back(b.I3());
            else {
                const auto s = b.snapshot();
                bool found = false;
                for (const auto& [tag, f] : s.components()) {
                    if (tag == comp) samples.push_back(*f), found = true;
                }
                if (!found) throw ConfigError("unknown component '" + comp + "'");
            }
        }
    }
    const auto est = estimate_regularity(samples);
    out.text("regularity.csv", regularity_csv(est));
    std::cout << "gamma_hat = " << fmt(est.gamma_hat) << " +- " << fmt(est.stderr_) << " (levels " << est.fit_min << ".."
              << est.fit_max << ")\n";
}

void cmd_comedown(const Params& p, Output& out) {
    const SimConfig c = sim_config(p);
    ComingDownOptions o;
    o.p = p.real("p");
    o.t_min = p.real("t_min");
    o.report_stride = p.real("report_stride");
    const auto rep = coming_down_experiment(c, p.reals("sizes"), o);
    out.text("comedown.csv", rep.csv());
    std::ostringstream summary;
    summary << "size,fitted_constant,blew_up,blow_up_time\n";
    for (const auto& run : rep.runs) {
        summary << run.initial_size << ',' << run.fitted_constant << ',' << run.blew_up << ',' << run.blow_up_time << '\n';
    }
    summary << "# spread_at_half," << rep.spread_at_half << "\n# spread_at_one," << rep.spread_at_one
            << "\n# constant_spread," << rep.constant_spread << '\n';
    out.text("comedown_summary.csv", summary.str());
    std::cout << summary.str();
    for (const auto& run : rep.runs) {
        if (run.blew_up) throw BlowUp("comedown: run with initial size " + fmt(run.initial_size) + " blew up", run.blow_up_time);
    }
}

SampleSet sample_from(const Params& p) {
    const SimConfig c = sim_config(p);
    SampleOptions o;
    o.burn_in = p.real("burn_in");
    o.stride = p.real("stride");
    o.count = static_cast<int>(p.integer("count"));
    return birkhoff_sample(c, o);
}

void cmd_cumulant(const Params& p, Output& out) {
    const SampleSet set = sample_from(p);
    if (set.blew_up) throw BlowUp("cumulant: sampling blew up", set.blow_up_time);
    if (set.stride_too_short) {
        std::cerr << "warning: stride " << set.options.stride << " is below the estimated correlation time "
                  << set.correlation_time << "\n";
    }
    const auto sweep = cumulant_sweep(set.fields, p.reals("probes"), static_cast<int>(p.integer("block")));
    out.text("cumulant.csv", sweep.csv());
    std::cout << sweep.csv();
}

void cmd_sample(const Params& p, Output& out) {
    const SampleSet set = sample_from(p);
    std::ostringstream csv;
    csv.precision(12);
    csv << "t,integral,l2\n";
    for (std::size_t i = 0; i < set.fields.size(); ++i) {
        csv << set.times[i] << ',' << set.spatial_integrals[i] << ',' << lp_norm(set.fields[i], 2.0) << '\n';
        if (p.boolean("save_fields")) {
            std::ostringstream name;
            name << "sample_" << std::setw(5) << std::setfill('0') << i << ".phi4";
            save_field(out.add(name.str()).string(), set.fields[i], "u");
        }
    }
    csv << "# lag_one_correlation," << set.lag_one_correlation << "\n# correlation_time," << set.correlation_time
        << "\n# stride_too_short," << set.stride_too_short << "\n# blew_up," << set.blew_up << '\n';
    out.text("samples.csv", csv.str());
    std::cout << "samples: " << set.fields.size() << ", correlation time " << fmt(set.correlation_time)
              << (set.stride_too_short ? " (stride too short)" : "") << "\n";
    if (set.blew_up) throw BlowUp("sample: blew up, partial set written", set.blow_up_time);
}

struct Subcommand {
    std::string name;
    std::string help;
    Defaults defaults;
    std::vector<std::string> switches;  // parameters given as bare flags
    std::function<void(const Params&, Output&)> run;
};

std::vector<Subcommand> subcommands() {
    const Defaults tree = {{"dim", "3"},        {"n", "32"},     {"period", two_pi()}, {"r", "0.01"},
                           {"dt", "0.005"},     {"burn_in", "5"}, {"burn_in_dt", "0.05"}, {"settle", "0.5"},
                           {"seed", "1"},       {"stream", "0"}, {"snapshots", "1"},   {"stride", "0.5"}};
    const Defaults sampling = {{"burn_in", "5"}, {"stride", "1"}, {"count", "200"}};
    return {
        {"simulate", "run the renormalized Langevin dynamics", with(sim_defaults(), {{"checkpoints", "false"}}),
         {"checkpoints"}, cmd_simulate},
        {"trees", "build enhanced-noise snapshots or an r-sweep divergence report", with(tree, {{"r_sweep", ""}}), {},
         cmd_trees},
        {"renorm-constants", "tabulate closed-form and numeric counterterms",
         {{"r", "1e-4:1e-2:8"}, {"dim", "3"}, {"period", two_pi()}}, {}, cmd_renorm},
        {"powercount", "power counting of a Feynman graph file", {{"file", ""}, {"json", "false"}}, {"json"},
         cmd_powercount},
        {"regularity", "dyadic regularity estimate of a tree component or of field files",
         with(tree, {{"n", "64"}, {"r", "1e-3"}, {"snapshots", "16"}, {"stride", "0.25"}, {"component", "X"}, {"files", ""}}),
         {}, cmd_regularity},
        {"comedown", "coming-down-from-infinity experiment on the Cole-Hopf variable",
         with(sim_defaults(), {{"horizon", "2"}, {"sizes", "1,10,100"}, {"p", "8"}, {"t_min", "0.05"}, {"report_stride", "0.05"}}),
         {}, cmd_comedown},
        {"cumulant", "fourth cumulant of the smoothed field under the invariant measure",
         with(with(sim_defaults(), sampling), {{"r", "0.005"}, {"dt", "0.01"}, {"probes", "0.01,0.02,0.04,0.08"}, {"block", "1"}}),
         {}, cmd_cumulant},
        {"sample", "Birkhoff samples of the invariant measure", with(with(sim_defaults(), sampling), {{"save_fields", "false"}}),
         {"save_fields"}, cmd_sample},
    };
}

std::string flag_name(const std::string& key) {
    std::string f = key;
    std::replace(f.begin(), f.end(), '_', '-');
    return "--" + f;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"phi4: stochastic quantization toolkit"};
    app.set_version_flag("--version", std::string("phi4 ") + kVersion);
    app.require_subcommand(1);
    app.footer(
        "Exit codes: 0 ok, 2 usage error, 3 invalid configuration, 4 refused precondition,\n"
        "            5 runtime failure or blow-up, 6 I/O error.\n"
        "Outputs go to --out, else $PHI4_OUTPUT_DIR, else the current directory.");

    const auto specs = subcommands();
    std::map<std::string, std::map<std::string, std::string>> flag_values;
    std::map<std::string, std::map<std::string, bool>> switch_values;
    std::map<std::string, std::vector<std::string>> configs;
    std::map<std::string, std::string> outs;
    std::map<std::string, CLI::App*> apps;
    for (const auto& s : specs) {
        CLI::App* sc = app.add_subcommand(s.name, s.help);
        apps[s.name] = sc;
        sc->add_option("--config", configs[s.name], "INI or JSON config file (repeatable; a run manifest also works)");
        sc->add_option("--out", outs[s.name], "output directory");
        for (const auto& [key, def] : s.defaults) {
            const bool is_switch = std::find(s.switches.begin(), s.switches.end(), key) != s.switches.end();
            if (is_switch) {
                sc->add_flag(flag_name(key), switch_values[s.name][key], "default " + def);
            } else {
                sc->add_option(flag_name(key), flag_values[s.name][key], "default " + (def.empty() ? "(none)" : def));
            }
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    const Subcommand* chosen = nullptr;
    for (const auto& s : specs) {
        if (apps[s.name]->parsed()) chosen = &s;
    }
    if (!chosen) return kUsage;
    CLI::App* sc = apps[chosen->name];

    try {
        std::map<std::string, std::string> flags;
        for (const auto& [key, def] : chosen->defaults) {
            CLI::Option* opt = sc->get_option(flag_name(key));
            if (opt->count() == 0) continue;
            const bool is_switch = std::find(chosen->switches.begin(), chosen->switches.end(), key) != chosen->switches.end();
            flags[key] = is_switch ? (switch_values[chosen->name][key] ? "true" : "false") : flag_values[chosen->name][key];
        }
        std::vector<Layer> layers;
        for (const auto& path : configs[chosen->name]) layers.push_back(load_config(path));
        const Params params = resolve(chosen->name, chosen->defaults, flags, layers);

        std::string dir = outs[chosen->name];
        if (dir.empty()) {
            const char* env = std::getenv("PHI4_OUTPUT_DIR");
            dir = env && *env ? env : ".";
        }
        Output out{dir, {}};
        std::error_code ec;
        fs::create_directories(out.dir, ec);
        if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());

        chosen->run(params, out);

        Manifest m{chosen->name, kVersion, params, {}};
        for (const auto& f : out.files) m.outputs.emplace_back(f, sha256_file((out.dir / f).string()));
        std::ofstream mf(out.dir / "manifest.json");
        if (!mf) throw IoError("cannot write manifest in '" + dir + "'");
        mf << m.json();
        return kOk;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const pc::ParseError& e) {
        std::cerr << "error: graph file " << e.what() << "\n";
        return kConfig;
    } catch (const TreeRefused& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const RegularityRefused& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const CutoffTooCoarse& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const pc::EnumerationRefused& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const ComparisonRefused& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const BlowUp& e) {
        std::cerr << "blow-up: " << e.what() << "\n";
        return kRuntime;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
}

}  // namespace phi4::cli
