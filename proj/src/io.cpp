#include "smag/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "smag/errors.hpp"
#include "smag/fields.hpp"

namespace smag {

namespace {

//--- value parsing ---------------------------------------------------------

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigError("config: " + key + ": not a number: '" + v + "'");
    return x;
}

long to_long(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigError("config: " + key + ": not an integer: '" + v + "'");
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    return static_cast<int>(to_long(key, v));
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigError("config: " + key + ": not an unsigned integer: '" + v + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("config: " + key + ": expected true or false, got '" + v + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) out.push_back(to_int(key, tok));
    if (out.empty()) throw ConfigError("config: " + key + ": empty list");
    return out;
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) out.push_back(to_double(key, tok));
    if (out.empty()) throw ConfigError("config: " + key + ": empty list");
    return out;
}

// Keyed access that consumes entries, so leftovers are exactly the unknown
// or inapplicable keys.
struct KeyBag {
    std::map<std::string, std::string> kv;

    bool take(const std::string& key, std::string& out) {
        auto it = kv.find(key);
        if (it == kv.end()) return false;
        out = it->second;
        kv.erase(it);
        return true;
    }

    template <typename T, typename F>
    void opt(const std::string& key, T& slot, F&& convert) {
        std::string v;
        if (take(key, v)) slot = convert(key, v);
    }
};

InitialCondition build_ic(KeyBag& bag, std::uint64_t seed, const InitialCondition& fallback) {
    std::string kind;
    const bool has_kind = bag.take("ic.kind", kind);
    if (!has_kind) {
        // No ic.kind: any stray ic.* key will be reported as unknown below.
        return fallback;
    }
    if (kind == "single_mode") {
        SingleMode m;
        bag.opt("ic.k0", m.k[0], to_int);
        bag.opt("ic.k1", m.k[1], to_int);
        bag.opt("ic.k2", m.k[2], to_int);
        bag.opt("ic.amplitude", m.amplitude, to_double);
        bag.opt("ic.pol0", m.polarization[0], to_double);
        bag.opt("ic.pol1", m.polarization[1], to_double);
        bag.opt("ic.pol2", m.polarization[2], to_double);
        return m;
    }
    if (kind == "abc") {
        ABC m;
        bag.opt("ic.A", m.A, to_double);
        bag.opt("ic.B", m.B, to_double);
        bag.opt("ic.C", m.C, to_double);
        return m;
    }
    if (kind == "orszag_tang") return OrszagTangLike{};
    if (kind == "random_band") {
        RandomBandLimited m;
        m.seed = seed;
        bag.opt("ic.k_min", m.k_min, to_int);
        bag.opt("ic.k_max", m.k_max, to_int);
        bag.opt("ic.target_norm", m.target_norm, to_double);
        bag.opt("ic.s", m.s, to_double);
        return m;
    }
    throw ConfigError("config: ic.kind: unknown initial condition '" + kind + "'");
}

//--- JSON emission ----------------------------------------------------------

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num_or_null(double v) { return std::isfinite(v) ? fmt17(v) : "null"; }

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

const char* lwp_name(LwpCase c) {
    switch (c) {
        case LwpCase::None: return "none";
        case LwpCase::CaseI: return "case_i";
        case LwpCase::CaseII: return "case_ii";
        case LwpCase::Boundary: return "boundary";
    }
    return "none";
}

const char* scaling_name(ScalingClass c) {
    switch (c) {
        case ScalingClass::Sub: return "subcritical";
        case ScalingClass::Critical: return "critical";
        case ScalingClass::Super: return "supercritical";
        case ScalingClass::Boundary: return "boundary";
    }
    return "critical";
}

// Appends the ic.* echo for whichever alternative is configured.
void append_ic_echo(std::string& o, const InitialCondition& ic) {
    if (const auto* m = std::get_if<SingleMode>(&ic)) {
        o += "\"ic.kind\":\"single_mode\"";
        o += ",\"ic.k0\":" + std::to_string(m->k[0]);
        o += ",\"ic.k1\":" + std::to_string(m->k[1]);
        o += ",\"ic.k2\":" + std::to_string(m->k[2]);
        o += ",\"ic.amplitude\":" + fmt17(m->amplitude);
        o += ",\"ic.pol0\":" + fmt17(m->polarization[0]);
        o += ",\"ic.pol1\":" + fmt17(m->polarization[1]);
        o += ",\"ic.pol2\":" + fmt17(m->polarization[2]);
    } else if (const auto* m = std::get_if<ABC>(&ic)) {
        o += "\"ic.kind\":\"abc\"";
        o += ",\"ic.A\":" + fmt17(m->A);
        o += ",\"ic.B\":" + fmt17(m->B);
        o += ",\"ic.C\":" + fmt17(m->C);
    } else if (std::get_if<OrszagTangLike>(&ic)) {
        o += "\"ic.kind\":\"orszag_tang\"";
    } else if (const auto* m = std::get_if<RandomBandLimited>(&ic)) {
        o += "\"ic.kind\":\"random_band\"";
        o += ",\"ic.k_min\":" + std::to_string(m->k_min);
        o += ",\"ic.k_max\":" + std::to_string(m->k_max);
        o += ",\"ic.target_norm\":" + fmt17(m->target_norm);
        o += ",\"ic.s\":" + fmt17(m->s);
    }
}

//--- checkpoint plumbing -----------------------------------------------------

constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a64_accum(std::uint64_t h, const void* data, std::size_t nbytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < nbytes; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

// Sequential header reader: the line order is part of the format.
struct HeaderReader {
    std::istringstream in;

    explicit HeaderReader(std::string text) : in(std::move(text)) {}

    std::string expect(const std::string& key) {
        std::string line;
        if (!std::getline(in, line)) throw IoError("checkpoint: truncated header at " + key);
        const auto sp = line.find(' ');
        if (sp == std::string::npos || line.substr(0, sp) != key)
            throw IoError("checkpoint: malformed header, expected " + key);
        return line.substr(sp + 1);
    }

    double num(const std::string& key) {
        const std::string v = expect(key);
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (v.empty() || end != v.c_str() + v.size())
            throw IoError("checkpoint: bad number for " + key);
        return x;
    }

    long integer(const std::string& key) {
        const std::string v = expect(key);
        char* end = nullptr;
        const long x = std::strtol(v.c_str(), &end, 10);
        if (v.empty() || end != v.c_str() + v.size())
            throw IoError("checkpoint: bad integer for " + key);
        return x;
    }

    std::uint64_t u64(const std::string& key) {
        const std::string v = expect(key);
        char* end = nullptr;
        const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
        if (v.empty() || end != v.c_str() + v.size())
            throw IoError("checkpoint: bad integer for " + key);
        return x;
    }
};

}  // namespace

const char* lwp_case_name(LwpCase c) { return lwp_name(c); }
const char* scaling_class_name(ScalingClass c) { return scaling_name(c); }

//--- configuration -----------------------------------------------------------

RunConfig parse_config(const std::string& text) {
    KeyBag bag;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key");
        if (!bag.kv.emplace(key, value).second)
            throw ConfigError("config: duplicate key '" + key + "'");
    }

    RunConfig cfg;
    SimParams& p = cfg.sim;
    bag.opt("sim.d", p.d, to_int);
    bag.opt("sim.n", p.n, to_int);
    bag.opt("sim.alpha", p.alpha, to_double);
    bag.opt("sim.beta", p.beta, to_double);
    bag.opt("sim.nu", p.nu, to_double);
    bag.opt("sim.eta", p.eta, to_double);
    bag.opt("sim.s", p.s, to_double);
    bag.opt("sim.t_end", p.t_end, to_double);
    bag.opt("sim.dt", p.dt, to_double);
    bag.opt("sim.cfl_number", p.cfl_number, to_double);
    bag.opt("sim.sample_every", p.sample_every, to_int);
    bag.opt("sim.seed", p.seed, to_u64);
    bag.opt("sim.reproject_every", p.reproject_every, to_int);
    bag.opt("sim.store_fields", p.store_fields, to_bool);
    bag.opt("sim.lp_exponent", p.lp_exponent, to_double);

    p.ic = build_ic(bag, p.seed, p.ic);

    bag.opt("io.out", cfg.out_path, [](const std::string&, const std::string& v) { return v; });
    bag.opt("io.checkpoint", cfg.checkpoint_path,
            [](const std::string&, const std::string& v) { return v; });
    bag.opt("io.checkpoint_at_step", cfg.checkpoint_at_step, to_long);

    bag.opt("exp.kind", cfg.exp_kind,
            [](const std::string&, const std::string& v) { return v; });
    bag.opt("exp.lambda", cfg.exp_lambda, to_int);
    bag.opt("exp.s_low", cfg.exp_s_low, to_double);
    bag.opt("exp.logsob_s", cfg.exp_logsob_s, to_double);
    bag.opt("exp.shells", cfg.exp_shells, to_int_list);
    bag.opt("exp.amplitudes", cfg.exp_amplitudes, to_double_list);
    bag.opt("exp.compare_points", cfg.exp_compare_points, to_int);

    bag.opt("picard.points", cfg.picard_points, to_int);
    bag.opt("picard.tol_rel", cfg.picard_tol_rel, to_double);
    bag.opt("picard.max_iters", cfg.picard_max_iters, to_int);

    if (!bag.kv.empty())
        throw ConfigError("config: unknown key '" + bag.kv.begin()->first + "'");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("config: read failure on '" + path + "'");
    return parse_config(buf.str());
}

ExperimentSpec make_experiment(const RunConfig& cfg) {
    if (cfg.exp_kind.empty()) throw ConfigError("config: exp.kind is not set");
    if (cfg.exp_kind == "scaling")
        return {ScalingExperiment{cfg.exp_lambda}, cfg.sim};
    if (cfg.exp_kind == "decay")
        return {DecayProbeExperiment{cfg.exp_s_low}, cfg.sim};
    if (cfg.exp_kind == "logsob")
        return {LogSobolevSweepExperiment{cfg.exp_shells, cfg.exp_logsob_s}, cfg.sim};
    if (cfg.exp_kind == "amplitude")
        return {AmplitudeSweepExperiment{cfg.exp_amplitudes}, cfg.sim};
    if (cfg.exp_kind == "picard-cross")
        return {PicardCrossExperiment{cfg.exp_compare_points}, cfg.sim};
    throw ConfigError("config: exp.kind: unknown experiment '" + cfg.exp_kind + "'");
}

//--- NDJSON -------------------------------------------------------------------

std::string header_line(const RunConfig& cfg, const RegimeReport& reg) {
    const SimParams& p = cfg.sim;
    std::string o = "{\"config\":{";
    o += "\"sim.d\":" + std::to_string(p.d);
    o += ",\"sim.n\":" + std::to_string(p.n);
    o += ",\"sim.alpha\":" + fmt17(p.alpha);
    o += ",\"sim.beta\":" + fmt17(p.beta);
    o += ",\"sim.nu\":" + fmt17(p.nu);
    o += ",\"sim.eta\":" + fmt17(p.eta);
    o += ",\"sim.s\":" + fmt17(p.s);
    o += ",\"sim.t_end\":" + fmt17(p.t_end);
    o += ",\"sim.dt\":" + fmt17(p.dt);
    o += ",\"sim.cfl_number\":" + fmt17(p.cfl_number);
    o += ",\"sim.sample_every\":" + std::to_string(p.sample_every);
    o += ",\"sim.seed\":" + std::to_string(p.seed);
    o += ",\"sim.reproject_every\":" + std::to_string(p.reproject_every);
    o += std::string(",\"sim.store_fields\":") + (p.store_fields ? "true" : "false");
    o += ",\"sim.lp_exponent\":" + fmt17(p.lp_exponent);
    o += ",";
    append_ic_echo(o, p.ic);
    o += ",\"io.out\":\"" + json_escape(cfg.out_path) + "\"";
    o += ",\"io.checkpoint\":\"" + json_escape(cfg.checkpoint_path) + "\"";
    o += ",\"io.checkpoint_at_step\":" + std::to_string(cfg.checkpoint_at_step);
    o += "},\"regime\":{";
    o += "\"lwp_case\":\"" + std::string(lwp_name(reg.lwp_case)) + "\"";
    o += ",\"alpha_star\":" + num_or_null(reg.alpha_star);
    o += std::string(",\"low_regularity_velocity\":") +
         (reg.low_regularity_velocity ? "true" : "false");
    o += std::string(",\"global_nonresistive\":") + (reg.global_nonresistive ? "true" : "false");
    o += std::string(",\"mild_admissible\":") + (reg.mild_admissible ? "true" : "false");
    o += ",\"p\":" + num_or_null(reg.p);
    o += ",\"q\":" + num_or_null(reg.q);
    o += ",\"r\":" + num_or_null(reg.r);
    o += ",\"sigma\":" + num_or_null(reg.sigma);
    o += ",\"theta_window_lo\":" + num_or_null(reg.theta_window_lo);
    o += ",\"theta_window_hi\":" + num_or_null(reg.theta_window_hi);
    o += ",\"scaling_class\":\"" + std::string(scaling_name(reg.scaling_class)) + "\"";
    o += ",\"reasons\":[";
    for (std::size_t i = 0; i < reg.reasons.size(); ++i) {
        if (i) o += ",";
        o += "\"" + json_escape(reg.reasons[i]) + "\"";
    }
    o += "]}}\n";
    return o;
}

std::string diagnostics_line(const DiagnosticsRecord& r, int d) {
    const bool has3 = d == 3;
    std::string o = "{";
    o += "\"t\":" + fmt17(r.t);
    o += ",\"M\":" + fmt17(r.M);
    o += ",\"H\":" + (has3 ? fmt17(r.H) : std::string("null"));
    o += ",\"u_Ha2\":" + fmt17(r.u_Ha2);
    o += ",\"u_Hd2p1\":" + fmt17(r.u_Hd2p1);
    o += ",\"b_Hs\":" + fmt17(r.b_Hs);
    o += ",\"b_H1\":" + fmt17(r.b_H1);
    o += ",\"b_Lp\":" + fmt17(r.b_Lp);
    o += ",\"energy_residual\":" + fmt17(r.energy_residual);
    o += ",\"cont_integral\":" + fmt17(r.cont_integral);
    o += ",\"arnold_margin\":" + (has3 ? fmt17(r.arnold_margin) : std::string("null"));
    o += "}\n";
    return o;
}

//--- checkpoints ----------------------------------------------------------------

std::uint64_t fnv1a64(const void* data, std::size_t nbytes) {
    return fnv1a64_accum(kFnvOffset, data, nbytes);
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
    static_assert(std::endian::native == std::endian::little,
                  "checkpoint payloads are little-endian");
    const Grid& g = ck.field.grid();
    if (g != Grid(ck.sim.d, ck.sim.n))
        throw ConfigError("checkpoint: field grid does not match the parameters");

    const std::size_t comp_bytes = g.size() * sizeof(std::complex<double>);
    std::uint64_t h = kFnvOffset;
    for (int c = 0; c < ck.field.components(); ++c)
        h = fnv1a64_accum(h, ck.field.component(c).data(), comp_bytes);

    const DiagnosticsRecord& lr = ck.rp.last_record;
    char head[2048];
    const int len = std::snprintf(
        head, sizeof head,
        "smagck 1\n"
        "endian little\n"
        "d %d\n"
        "n %d\n"
        "alpha %.17g\nbeta %.17g\nnu %.17g\neta %.17g\ns %.17g\n"
        "t_end %.17g\ndt %.17g\ncfl_number %.17g\n"
        "sample_every %d\nseed %llu\nreproject_every %d\nstore_fields %d\n"
        "lp_exponent %.17g\n"
        "t %.17g\nstep %ld\ninitial_hs %.17g\n"
        "last_record %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n"
        "payload_bytes %zu\n"
        "fnv1a %016llx\n"
        "---\n",
        ck.sim.d, ck.sim.n, ck.sim.alpha, ck.sim.beta, ck.sim.nu, ck.sim.eta, ck.sim.s,
        ck.sim.t_end, ck.sim.dt, ck.sim.cfl_number, ck.sim.sample_every,
        static_cast<unsigned long long>(ck.sim.seed), ck.sim.reproject_every,
        ck.sim.store_fields ? 1 : 0, ck.sim.lp_exponent, ck.rp.t, ck.rp.step, ck.rp.initial_hs,
        lr.t, lr.M, lr.H, lr.u_Ha2, lr.u_Hd2p1, lr.b_Hs, lr.b_H1, lr.b_Lp, lr.energy_residual,
        lr.cont_integral, lr.arnold_margin, lr.diss_b,
        ck.field.components() * comp_bytes, static_cast<unsigned long long>(h));
    if (len < 0 || len >= int(sizeof head)) throw IoError("checkpoint: header assembly failed");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("checkpoint: cannot open '" + path + "' for writing");
    out.write(head, len);
    for (int c = 0; c < ck.field.components(); ++c)
        out.write(reinterpret_cast<const char*>(ck.field.component(c).data()),
                  std::streamsize(comp_bytes));
    out.flush();
    if (!out) throw IoError("checkpoint: write failure on '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("checkpoint: cannot open '" + path + "'");
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("checkpoint: read failure on '" + path + "'");

    const std::string sep = "\n---\n";
    const auto cut = blob.find(sep);
    if (cut == std::string::npos) throw IoError("checkpoint: missing header separator");
    HeaderReader hr(blob.substr(0, cut + 1));
    const std::size_t payload_at = cut + sep.size();

    Checkpoint ck;
    if (hr.expect("smagck") != "1") throw IoError("checkpoint: unsupported format version");
    if (hr.expect("endian") != "little") throw IoError("checkpoint: unsupported byte order");
    ck.sim.d = int(hr.integer("d"));
    ck.sim.n = int(hr.integer("n"));
    ck.sim.alpha = hr.num("alpha");
    ck.sim.beta = hr.num("beta");
    ck.sim.nu = hr.num("nu");
    ck.sim.eta = hr.num("eta");
    ck.sim.s = hr.num("s");
    ck.sim.t_end = hr.num("t_end");
    ck.sim.dt = hr.num("dt");
    ck.sim.cfl_number = hr.num("cfl_number");
    ck.sim.sample_every = int(hr.integer("sample_every"));
    ck.sim.seed = hr.u64("seed");
    ck.sim.reproject_every = int(hr.integer("reproject_every"));
    ck.sim.store_fields = hr.integer("store_fields") != 0;
    ck.sim.lp_exponent = hr.num("lp_exponent");
    ck.rp.t = hr.num("t");
    ck.rp.step = hr.integer("step");
    ck.rp.initial_hs = hr.num("initial_hs");
    {
        std::istringstream lr(hr.expect("last_record"));
        DiagnosticsRecord& r = ck.rp.last_record;
        if (!(lr >> r.t >> r.M >> r.H >> r.u_Ha2 >> r.u_Hd2p1 >> r.b_Hs >> r.b_H1 >> r.b_Lp >>
              r.energy_residual >> r.cont_integral >> r.arnold_margin >> r.diss_b))
            throw IoError("checkpoint: malformed last_record");
    }
    const long payload_bytes = hr.integer("payload_bytes");
    const std::string hash_text = hr.expect("fnv1a");

    Grid g;
    try {
        g = Grid(ck.sim.d, ck.sim.n);
    } catch (const ConfigError& e) {
        throw IoError(std::string("checkpoint: bad grid descriptor: ") + e.what());
    }
    const std::size_t comp_bytes = g.size() * sizeof(std::complex<double>);
    const std::size_t want = std::size_t(g.d) * comp_bytes;
    if (payload_bytes < 0 || std::size_t(payload_bytes) != want)
        throw IoError("checkpoint: payload size does not match the grid");
    if (blob.size() - payload_at != want) throw IoError("checkpoint: truncated payload");

    char* end = nullptr;
    const std::uint64_t want_hash = std::strtoull(hash_text.c_str(), &end, 16);
    if (hash_text.empty() || end != hash_text.c_str() + hash_text.size())
        throw IoError("checkpoint: malformed hash");
    if (fnv1a64(blob.data() + payload_at, want) != want_hash)
        throw IoError("checkpoint: content hash mismatch");

    ck.field = SpectralVectorField(g);
    for (int c = 0; c < g.d; ++c)
        std::memcpy(ck.field.component(c).data(), blob.data() + payload_at + c * comp_bytes,
                    comp_bytes);
    return ck;
}

}  // namespace smag
