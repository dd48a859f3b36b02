#include "spinphoton/cli.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace spinphoton::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::array kCavityQuantities{"g", "gamma", "kappa_s", "omega_c", "omega_x"};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(std::string_view text, std::string_view what) {
    const std::string t = trim(text);
    double v = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (!t.empty() && *begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (t.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw UsageError(std::string(what) + ": expected a finite number, got '" + t + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view what) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw UsageError(std::string(what) + ": expected a non-negative integer, got '" + t + "'");
    }
    return v;
}

bool is_cavity_key(std::string_view prefix, std::string_view key) {
    if (!key.starts_with(prefix)) {
        return false;
    }
    const std::string_view rest = key.substr(prefix.size());
    if (rest == "kappa") {
        return true;
    }
    for (std::string_view q : kCavityQuantities) {
        if (rest == q || (rest.starts_with(q) && rest.substr(q.size()) == "_rel")) {
            return true;
        }
    }
    return false;
}

bool is_known_key(std::string_view key) {
    static constexpr std::array kPlain{"gate.mode",  "gate.delta_phi", "gate.detuning_rel",
                                       "protocol",   "alpha1",         "beta1",
                                       "alpha2",     "beta2",          "noise.t_over_t2",
                                       "seed",       "trials",         "ghz.n_photons"};
    for (std::string_view k : kPlain) {
        if (key == k) {
            return true;
        }
    }
    return is_cavity_key("cavity.", key) || is_cavity_key("cavity2.", key);
}

using KeyValues = std::map<std::string, std::string, std::less<>>;

/// Rates in units of the primary kappa. `base` supplies values for keys the
/// file leaves unset.
CavityParams resolve_cavity(const KeyValues& kv, std::string_view prefix, double unit_kappa,
                            const CavityParams& base) {
    const std::string p(prefix);
    auto find = [&](const std::string& key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    CavityParams out = base;
    if (const auto* k = find(p + "kappa")) {
        out.kappa = parse_double(*k, p + "kappa") / unit_kappa;
    }
    for (std::string_view q : kCavityQuantities) {
        const std::string abs_key = p + std::string(q);
        const std::string rel_key = abs_key + "_rel";
        const auto* a = find(abs_key);
        const auto* r = find(rel_key);
        if (a && r) {
            throw UsageError("both " + abs_key + " and " + rel_key + " given");
        }
        if (!a && !r) {
            continue;
        }
        const double v = a ? parse_double(*a, abs_key) / unit_kappa : parse_double(*r, rel_key);
        if (q == "g") {
            out.g = v;
        } else if (q == "gamma") {
            out.gamma = v;
        } else if (q == "kappa_s") {
            out.kappa_s = v;
        } else if (q == "omega_c") {
            out.omega_c = v;
        } else {
            out.omega_x = v;
        }
    }
    try {
        out.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(p.substr(0, p.size() - 1) + ": " + e.what());
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json cavity_json(const CavityParams& c) {
    Json j;
    j["g"] = c.g;
    j["kappa"] = c.kappa;
    j["gamma"] = c.gamma;
    j["kappa_s"] = c.kappa_s;
    j["omega_c"] = c.omega_c;
    j["omega_x"] = c.omega_x;
    return j;
}

Json state_json(const Branch& b) {
    Json j;
    Json qubits = Json::array();
    for (const auto& q : b.state.qubits()) {
        qubits.push_back(to_string(q));
    }
    j["qubits"] = qubits;
    Json basis = Json::array();
    for (std::size_t i = 0; i < b.state.dimension(); ++i) {
        basis.push_back(basis_string(b.state.qubits(), i));
    }
    j["basis"] = basis;
    if (b.pure) {
        Json amps = Json::array();
        for (Eigen::Index i = 0; i < b.pure->amplitudes().size(); ++i) {
            amps.push_back(complex_json(b.pure->amplitudes()[i]));
        }
        j["amplitudes"] = amps;
    } else {
        Json rows = Json::array();
        const auto& m = b.state.matrix();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            Json row = Json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                row.push_back(complex_json(m(r, c)));
            }
            rows.push_back(row);
        }
        j["density"] = rows;
    }
    return j;
}

class Output {
  public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
        if (!*file_) {
            throw IoError("cannot open '" + path + "' for writing");
        }
        stream_ = file_.get();
        path_ = path;
    }

    std::ostream& stream() { return *stream_; }

    void finish() {
        stream_->flush();
        if (!*stream_) {
            throw IoError("write to '" + (path_.empty() ? std::string("stdout") : path_) + "' failed");
        }
    }

  private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
    std::string path_;
};

struct Options {
    std::string config_path;
    std::string out_path;
    std::string sweep_name;
    std::string grid;
    std::optional<std::uint64_t> seed;
    std::optional<long long> trials;
};

RunConfig config_from(const Options& o) {
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    return cfg;
}

int cmd_reflectance(const Options& o, std::ostream& out) {
    const RunConfig cfg = config_from(o);
    const auto grid = parse_grid(o.grid.empty() ? std::string_view("-5:5:1001") : o.grid);
    const auto rows = reflectance_sweep(cfg.cavity, grid);
    Output sink(o.out_path, out);
    write_reflectance_csv(sink.stream(), rows);
    sink.finish();
    return kExitOk;
}

int cmd_protocol(const Options& o, std::ostream& out) {
    const RunConfig cfg = config_from(o);
    const auto result = run_protocol(cfg.protocol, cfg.protocol_config(), cfg.ghz_photons);
    const std::string text = protocol_json(cfg, result);
    Output sink(o.out_path, out);
    sink.stream() << text << '\n';
    sink.finish();
    return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    const auto param = parse_sweep_parameter(o.sweep_name);
    if (!param) {
        throw UsageError("unknown sweep parameter '" + o.sweep_name +
                         "'; valid names: " + sweep_parameter_list());
    }
    if (o.grid.empty()) {
        throw UsageError("sweep requires --grid");
    }
    const RunConfig cfg = config_from(o);
    SweepSpec spec;
    spec.parameter = *param;
    spec.grid = parse_grid(o.grid);
    spec.config = cfg.protocol_config();
    spec.protocol = cfg.protocol;
    spec.ghz_photons = cfg.ghz_photons;
    const auto table = run_sweep(spec);
    Output sink(o.out_path, out);
    write_sweep_csv(sink.stream(), table);
    sink.finish();
    return kExitOk;
}

int cmd_sample(const Options& o, std::ostream& out) {
    const RunConfig cfg = config_from(o);
    const long long trials = o.trials ? *o.trials : static_cast<long long>(cfg.trials);
    if (trials < 1) {
        throw UsageError("trials must be at least 1");
    }
    const auto result = run_protocol(cfg.protocol, cfg.protocol_config(), cfg.ghz_photons);
    const auto labels = sample_branches(result, cfg.seed, static_cast<std::size_t>(trials));
    Output sink(o.out_path, out);
    write_samples_csv(sink.stream(), labels);
    sink.finish();
    return kExitOk;
}

} // namespace

ProtocolConfig RunConfig::protocol_config() const {
    ProtocolConfig c;
    if (realistic) {
        const double omega = cavity.omega_c + detuning_rel * cavity.kappa;
        c.gate = RealisticMode{cavity, omega};
        if (cavity2) {
            c.second_cavity = RealisticMode{*cavity2, omega};
        }
    } else {
        c.gate = IdealMode{delta_phi};
    }
    c.t_over_t2 = t_over_t2;
    c.alpha1 = alpha1;
    c.beta1 = beta1;
    c.alpha2 = alpha2;
    c.beta2 = beta2;
    c.seed = seed;
    return c;
}

Complex parse_complex(std::string_view text) {
    std::string t;
    for (char ch : text) {
        if (ch != ' ' && ch != '\t') {
            t.push_back(ch);
        }
    }
    if (t.empty()) {
        throw UsageError("empty complex value");
    }
    if (t.back() != 'j' && t.back() != 'J') {
        return {parse_double(t, "complex value"), 0.0};
    }
    t.pop_back();
    // Split at the last sign that is not part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imag_of = [&](const std::string& s) {
        if (s.empty() || s == "+") {
            return 1.0;
        }
        if (s == "-") {
            return -1.0;
        }
        return parse_double(s, "complex value");
    };
    if (split == std::string::npos) {
        return {0.0, imag_of(t)};
    }
    return {parse_double(t.substr(0, split), "complex value"), imag_of(t.substr(split))};
}

std::vector<double> parse_grid(std::string_view text) {
    const std::string t = trim(text);
    if (t.empty()) {
        throw UsageError("empty grid");
    }
    std::vector<std::string> parts;
    const char sep = t.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(t);
    for (std::string part; std::getline(ss, part, sep);) {
        parts.push_back(part);
    }
    if (sep == ',') {
        std::vector<double> grid;
        for (const auto& p : parts) {
            grid.push_back(parse_double(p, "grid"));
        }
        return grid;
    }
    if (parts.size() != 3) {
        throw UsageError("grid range must look like a:b:n, got '" + t + "'");
    }
    const double a = parse_double(parts[0], "grid start");
    const double b = parse_double(parts[1], "grid stop");
    const auto n = parse_unsigned(parts[2], "grid count");
    if (n == 0) {
        throw UsageError("grid range is empty");
    }
    if (n == 1) {
        return {a};
    }
    if (!(b > a)) {
        throw UsageError("grid range needs stop > start");
    }
    std::vector<double> grid(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        grid[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    grid.back() = b;
    return grid;
}

RunConfig parse_config(std::string_view text) {
    KeyValues kv;
    std::istringstream in{std::string(text)};
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw UsageError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (!is_known_key(key)) {
            throw UsageError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (value.empty()) {
            throw UsageError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
        }
        if (!kv.emplace(key, value).second) {
            throw UsageError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }

    RunConfig cfg;
    auto get = [&](std::string_view key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    if (const auto* v = get("protocol")) {
        const auto kind = parse_protocol(*v);
        if (!kind) {
            throw UsageError("protocol: unknown value '" + *v +
                             "' (scheme-a, scheme-b, transfer-ps, transfer-sp, ghz)");
        }
        cfg.protocol = *kind;
    }
    if (const auto* v = get("gate.mode")) {
        if (*v == "ideal") {
            cfg.realistic = false;
        } else if (*v == "realistic") {
            cfg.realistic = true;
        } else {
            throw UsageError("gate.mode: expected ideal or realistic, got '" + *v + "'");
        }
    }
    if (const auto* v = get("gate.delta_phi")) {
        cfg.delta_phi = parse_double(*v, "gate.delta_phi");
    }
    if (const auto* v = get("gate.detuning_rel")) {
        cfg.detuning_rel = parse_double(*v, "gate.detuning_rel");
    }

    double unit_kappa = 1.0;
    if (const auto* v = get("cavity.kappa")) {
        unit_kappa = parse_double(*v, "cavity.kappa");
        if (!(unit_kappa > 0.0)) {
            throw UsageError("cavity.kappa must be positive");
        }
    }
    cfg.cavity = resolve_cavity(kv, "cavity.", unit_kappa, RunConfig{}.cavity);
    cfg.cavity.kappa = 1.0;
    bool has_second = false;
    for (const auto& [k, _] : kv) {
        has_second = has_second || k.starts_with("cavity2.");
    }
    if (has_second) {
        cfg.cavity2 = resolve_cavity(kv, "cavity2.", unit_kappa, cfg.cavity);
    }

    const std::array<std::pair<const char*, Complex*>, 4> amps{
        {{"alpha1", &cfg.alpha1}, {"beta1", &cfg.beta1}, {"alpha2", &cfg.alpha2}, {"beta2", &cfg.beta2}}};
    for (const auto& [key, dst] : amps) {
        if (const auto* v = get(key)) {
            try {
                *dst = parse_complex(*v);
            } catch (const UsageError& e) {
                throw UsageError(std::string(key) + ": " + e.what());
            }
        }
    }
    // A lone alpha means a basis state unless beta is given explicitly.
    if (get("alpha1") && !get("beta1")) {
        cfg.beta1 = std::sqrt(std::max(0.0, 1.0 - std::norm(cfg.alpha1)));
    }
    if (get("alpha2") && !get("beta2")) {
        cfg.beta2 = std::sqrt(std::max(0.0, 1.0 - std::norm(cfg.alpha2)));
    }
    if (const auto* v = get("noise.t_over_t2")) {
        const double t = parse_double(*v, "noise.t_over_t2");
        if (t < 0.0) {
            throw UsageError("noise.t_over_t2 must be non-negative");
        }
        cfg.t_over_t2 = t;
    }
    if (const auto* v = get("seed")) {
        cfg.seed = parse_unsigned(*v, "seed");
    }
    if (const auto* v = get("trials")) {
        cfg.trials = parse_unsigned(*v, "trials");
        if (cfg.trials == 0) {
            throw UsageError("trials must be at least 1");
        }
    }
    if (const auto* v = get("ghz.n_photons")) {
        const auto n = parse_unsigned(*v, "ghz.n_photons");
        if (n < 2 || n > static_cast<std::uint64_t>(kMaxChainPhotons)) {
            throw UsageError("ghz.n_photons must be between 2 and " + std::to_string(kMaxChainPhotons));
        }
        cfg.ghz_photons = static_cast<int>(n);
    }
    try {
        cfg.protocol_config().validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read config '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void write_reflectance_csv(std::ostream& out, const std::vector<ReflectanceRow>& rows) {
    out << "detuning_rel,r_cold_re,r_cold_im,phase_cold,r_hot_re,r_hot_im,phase_hot,delta_phi\n";
    for (const auto& r : rows) {
        out << fmt(r.detuning_rel) << ',' << fmt(r.cold.r.real()) << ',' << fmt(r.cold.r.imag()) << ','
            << fmt(r.cold.phase) << ',' << fmt(r.hot.r.real()) << ',' << fmt(r.hot.r.imag()) << ','
            << fmt(r.hot.phase) << ',' << fmt(r.delta_phi) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
    out << "swept_name,swept_value,branch_label,probability,fidelity,concurrence,success_probability\n";
    for (const auto& r : table.rows) {
        out << table.swept_name << ',' << fmt(r.swept_value) << ',' << r.branch_label << ','
            << fmt(r.probability) << ',' << fmt(r.fidelity) << ','
            << (r.concurrence ? fmt(*r.concurrence) : std::string()) << ','
            << fmt(r.success_probability) << '\n';
    }
}

void write_samples_csv(std::ostream& out, const std::vector<std::string>& labels) {
    out << "trial_index,branch_label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << i << ',' << labels[i] << '\n';
    }
}

std::string protocol_json(const RunConfig& config, const ProtocolResult& result) {
    Json doc;
    doc["protocol"] = std::string(protocol_name(config.protocol));

    Json echo;
    Json gate;
    gate["mode"] = config.realistic ? "realistic" : "ideal";
    if (config.realistic) {
        gate["detuning_rel"] = config.detuning_rel;
    } else {
        gate["delta_phi"] = config.delta_phi;
    }
    echo["gate"] = gate;
    if (config.realistic) {
        echo["cavity"] = cavity_json(config.cavity);
        if (config.cavity2) {
            echo["cavity2"] = cavity_json(*config.cavity2);
        }
    }
    echo["alpha1"] = complex_json(config.alpha1);
    echo["beta1"] = complex_json(config.beta1);
    echo["alpha2"] = complex_json(config.alpha2);
    echo["beta2"] = complex_json(config.beta2);
    echo["t_over_t2"] = config.t_over_t2 ? Json(*config.t_over_t2) : Json(nullptr);
    echo["seed"] = config.seed;
    if (config.protocol == ProtocolKind::Ghz) {
        echo["ghz_photons"] = config.ghz_photons;
    }
    doc["config"] = echo;

    Json branches = Json::array();
    for (const auto& b : result.branches) {
        Json j;
        j["label"] = b.label;
        j["probability"] = b.probability;
        j["state"] = state_json(b);
        j["fidelity"] = b.fidelity;
        j["concurrence"] = b.concurrence ? Json(*b.concurrence) : Json(nullptr);
        j["success_probability"] = b.success_probability;
        branches.push_back(j);
    }
    doc["branches"] = branches;

    Json joint = Json::array();
    for (const auto& jo : result.joint) {
        Json outcomes;
        for (const auto& [k, v] : jo.record) {
            outcomes[k] = v;
        }
        joint.push_back(Json{{"outcomes", outcomes}, {"probability", jo.probability}});
    }
    doc["joint"] = joint;
    return doc.dump(2);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spin-photon entanglement protocol simulator"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "run config file (key = value)");
        sub->add_option("--out", o.out_path, "output file (default stdout)");
        sub->add_option("--seed", o.seed, "overrides the config seed");
    };
    auto* reflectance = app.add_subcommand("reflectance", "cold/hot reflection spectra as CSV");
    add_common(reflectance);
    reflectance->add_option("--grid", o.grid, "detuning/kappa as a:b:n or a comma list");
    auto* protocol = app.add_subcommand("protocol", "all branches of one protocol as JSON");
    add_common(protocol);
    auto* sweep = app.add_subcommand("sweep", "protocol metrics over a parameter grid as CSV");
    add_common(sweep);
    sweep->add_option("--sweep", o.sweep_name, "g_rel, gamma_rel, kappa_s_rel, detuning_rel or t_over_t2")
        ->required();
    sweep->add_option("--grid", o.grid, "a:b:n or a comma list")->required();
    auto* sample = app.add_subcommand("sample", "seeded branch samples as CSV");
    add_common(sample);
    sample->add_option("--trials", o.trials, "number of trials (overrides the config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (reflectance->parsed()) {
            return cmd_reflectance(o, out);
        }
        if (protocol->parsed()) {
            return cmd_protocol(o, out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(o, out);
        }
        return cmd_sample(o, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInternal;
    }
}

} // namespace spinphoton::cli
