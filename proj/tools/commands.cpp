#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>

#include "spinchain/errors.hpp"
#include "spinchain/flows.hpp"
#include "spinchain/linearization.hpp"
#include "spinchain/moment_map.hpp"
#include "spinchain/monodromy.hpp"
#include "spinchain/sampling.hpp"
#include "spinchain/spin_system.hpp"

namespace spinchain::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

class IoError : public Error {
public:
    using Error::Error;
};

enum class Format { Json, Csv };

const std::map<std::string, Format> kFormats{{"json", Format::Json}, {"csv", Format::Csv}};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << (v == 0.0 ? 0.0 : v);
    return os.str();
}

// Writes text to path, or to out when path is empty.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f.flush()) throw IoError("write to '" + path + "' failed");
}

Json header(const std::string& command) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    return j;
}

Json to_json(const MomentValue& m) { return Json::array({m.h, m.i, m.j}); }
Json to_json(const FlowTimes& v) { return Json::array({v.t_h, v.t_i, v.t_j}); }

// ---------------------------------------------------------------- verify-brackets

struct BracketOptions {
    std::size_t samples = 10000;
    std::uint64_t seed = 7;
    double h_min = 0.05;
    double tol = 1e-10;
    std::size_t chain_n = 0;
    double tol_chain = 1e-6;
    Format format = Format::Json;
    std::string out;
};

int cmd_verify_brackets(const BracketOptions& o, std::ostream& out) {
    const std::array<std::pair<Observable, Observable>, 3> pairs{{
        {Observable::H(), Observable::I()},
        {Observable::H(), Observable::J()},
        {Observable::I(), Observable::J()},
    }};
    const std::array<std::string, 3> names{"H,I", "H,J", "I,J"};
    std::array<double, 3> worst{};
    for (std::size_t k = 0; k < o.samples; ++k) {
        CounterRng rng(o.seed, k);
        SpinTriple p = random_triple(rng);
        while (!(h_value(p) > o.h_min)) p = random_triple(rng);
        for (std::size_t q = 0; q < 3; ++q) {
            worst[q] = std::max(worst[q], std::abs(poisson_bracket(pairs[q].first, pairs[q].second, p)));
        }
    }
    bool pass = std::all_of(worst.begin(), worst.end(), [&](double w) { return w < o.tol; });

    std::array<double, 3> chain_worst{};
    const std::array<std::pair<ChainObservable, ChainObservable>, 3> chain_pairs{{
        {ChainObservable::H(), ChainObservable::I()},
        {ChainObservable::H(), ChainObservable::J()},
        {ChainObservable::I(), ChainObservable::J()},
    }};
    if (o.chain_n > 0) {
        for (std::size_t k = 0; k < o.samples; ++k) {
            CounterRng rng(o.seed ^ 0xC4A1ULL, k);
            const SpinChain c = random_chain(rng, o.chain_n);
            for (std::size_t q = 0; q < 3; ++q) {
                chain_worst[q] = std::max(
                    chain_worst[q],
                    std::abs(chain_poisson_bracket(chain_pairs[q].first, chain_pairs[q].second, c)));
            }
        }
        pass = pass && std::all_of(chain_worst.begin(), chain_worst.end(),
                                   [&](double w) { return w < o.tol_chain; });
    }

    std::string text;
    if (o.format == Format::Json) {
        Json j = header("verify-brackets");
        j["samples"] = o.samples;
        j["seed"] = o.seed;
        j["h_min"] = o.h_min;
        j["tol"] = o.tol;
        Json m;
        for (std::size_t q = 0; q < 3; ++q) m[names[q]] = worst[q];
        j["max_abs"] = m;
        if (o.chain_n > 0) {
            Json c;
            c["n"] = o.chain_n;
            c["tol"] = o.tol_chain;
            Json cm;
            for (std::size_t q = 0; q < 3; ++q) cm[names[q]] = chain_worst[q];
            c["max_abs"] = cm;
            j["chain"] = c;
        }
        j["pass"] = pass;
        text = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "system,pair,max_abs,tol\n";
        for (std::size_t q = 0; q < 3; ++q) os << "triple," << names[q] << ',' << fmt(worst[q]) << ',' << fmt(o.tol) << '\n';
        if (o.chain_n > 0) {
            for (std::size_t q = 0; q < 3; ++q) {
                os << "chain" << o.chain_n << ',' << names[q] << ',' << fmt(chain_worst[q]) << ','
                   << fmt(o.tol_chain) << '\n';
            }
        }
        text = os.str();
    }
    emit(text, o.out, out);
    return pass ? kPass : kAssertionFailure;
}

// ---------------------------------------------------------------- image

struct ImageOptions {
    std::size_t samples = 100000;
    std::uint64_t seed = 7;
    std::size_t resolution = 41;
    std::optional<double> slice;
    double tol = 1e-9;
    std::string out;
};

std::string mesh_csv(const std::vector<MeshPoint>& mesh) {
    std::ostringstream os;
    os << "r,s,t,face\n";
    for (const auto& m : mesh) os << fmt(m.r) << ',' << fmt(m.s) << ',' << fmt(m.t) << ',' << to_string(m.face) << '\n';
    return os.str();
}

int cmd_image(const ImageOptions& o, std::ostream& out) {
    const auto samples = sample_image(o.samples, o.seed);
    std::ostringstream csv;
    csv << "h,i,j,class,rank\n";
    std::size_t violations = 0;
    std::map<std::string, std::size_t> counts;
    for (const auto& s : samples) {
        if (!in_image(s.value, o.tol)) ++violations;
        ++counts[std::string(to_string(s.klass.tag))];
        csv << fmt(s.value.h) << ',' << fmt(s.value.i) << ',' << fmt(s.value.j) << ',' << to_string(s.klass.tag)
            << ',' << s.klass.rank << '\n';
    }

    const std::string dir = o.out.empty() ? std::string(".") : o.out;
    std::vector<std::string> files;
    auto write = [&](const std::string& name, const std::string& text) {
        const std::string path = dir + "/" + name;
        emit(text, path, out);
        files.push_back(path);
    };
    write("samples.csv", csv.str());

    std::vector<MeshPoint> boundary;
    std::vector<MeshPoint> line;
    for (const auto& m : critical_value_set(o.resolution)) {
        (m.face == MeshFace::CriticalLine ? line : boundary).push_back(m);
    }
    write("boundary.csv", mesh_csv(boundary));
    write("critical_line.csv", mesh_csv(line));
    if (o.slice) write("slice.csv", mesh_csv(slice_curves(*o.slice, o.resolution)));

    Json j = header("image");
    j["samples"] = o.samples;
    j["seed"] = o.seed;
    j["tol"] = o.tol;
    j["violations"] = violations;
    Json c;
    for (const auto& [k, v] : counts) c[k] = v;
    j["class_counts"] = c;
    j["files"] = files;
    j["pass"] = violations == 0;
    out << j.dump(2) << '\n';
    return violations == 0 ? kPass : kAssertionFailure;
}

// ---------------------------------------------------------------- classify

struct ClassifyOptions {
    std::string point;
    double tol_norm = 1e-6;
    Format format = Format::Json;
    std::string out;
};

SpinTriple parse_point(const std::string& text, double tol_norm) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double d = 0.0;
        try {
            d = std::stod(item, &used);
        } catch (const std::exception&) {
            throw DomainError("classify: cannot parse '" + item + "' as a real number");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(d)) {
            throw DomainError("classify: cannot parse '" + item + "' as a real number");
        }
        v.push_back(d);
    }
    if (v.size() != 9) throw DomainError("classify: expected 9 comma-separated reals");
    std::array<UnitVec3, 3> spins{kE3, kE3, kE3};
    for (int k = 0; k < 3; ++k) {
        const Vec3 w{v[3 * k], v[3 * k + 1], v[3 * k + 2]};
        if (std::abs(w.norm() - 1.0) > tol_norm) {
            throw DomainError("classify: spin " + std::to_string(k + 1) + " is not unit length");
        }
        spins[static_cast<std::size_t>(k)] = UnitVec3::normalized(w);
    }
    return {spins[0], spins[1], spins[2]};
}

int cmd_classify(const ClassifyOptions& o, std::ostream& out) {
    const SpinTriple p = parse_point(o.point, o.tol_norm);
    const CriticalClass c = classify(p);
    const MomentValue m = moment(p);
    std::string text;
    if (o.format == Format::Json) {
        Json j = header("classify");
        j["point"] = p.flat();
        j["class"] = std::string(to_string(c.tag));
        j["rank"] = c.rank;
        j["moment"] = to_json(m);
        text = j.dump(2) + "\n";
    } else {
        text = "class,rank,h,i,j\n" + std::string(to_string(c.tag)) + ',' + std::to_string(c.rank) + ',' +
               fmt(m.h) + ',' + fmt(m.i) + ',' + fmt(m.j) + '\n';
    }
    emit(text, o.out, out);
    return kPass;
}

// ---------------------------------------------------------------- linearize

struct LinearizeOptions {
    std::vector<double> s;
    std::size_t count = 33;
    double tol_class = 1e-6;
    double tol_zero = 1e-8;
    Format format = Format::Csv;
    std::string out;
};

// Reference golden matrices, in the order (z1, z2, z3, theta1, theta2, theta3).
Matrix6 reference_a_j_hat() {
    Matrix6 m;
    m << 0, 1, 1, 0, 0, 0,
        -1, 0, -1, 0, 0, 0,
        1, -1, 0, 0, 0, 0,
        0, 0, 0, 0, -1, -1,
        0, 0, 0, 1, 0, 1,
        0, 0, 0, -1, 1, 0;
    return m;
}

Matrix6 reference_a_h_hat(double s) {
    const double b2 = 1.0 - s * s;
    const double c = 1.0 / b2;
    Matrix6 m;
    m << 0, 0, 0, 0, -b2, b2,
        0, 0, 0, -b2, 0, b2,
        0, 0, 0, b2, b2, -2 * b2,
        0, c, c, 0, 0, 0,
        c, 0, c, 0, 0, 0,
        c, c, 2 * c, 0, 0, 0;
    return 2.0 * m;
}

struct GoldenRow {
    double s;
    std::string which;
    double max_abs;
    int mismatched;
};

std::vector<GoldenRow> golden_check() {
    std::vector<GoldenRow> rows;
    for (double s : {-0.5, 0.0, 0.7}) {
        const CylCoords c = focus_focus_point(s);
        const std::array<std::pair<std::string, Matrix6>, 2> cases{{
            {"A_Jhat", linearization(HatFunction::JHat, c).entries - reference_a_j_hat()},
            {"A_Hhat", linearization(HatFunction::HHat, c).entries - reference_a_h_hat(s)},
        }};
        for (const auto& [name, diff] : cases) {
            const int bad = static_cast<int>((diff.array().abs() > 1e-12).count());
            rows.push_back({s, name, diff.cwiseAbs().maxCoeff(), bad});
        }
    }
    return rows;
}

int cmd_linearize(const LinearizeOptions& o, std::ostream& out, std::ostream& err) {
    std::vector<double> grid = o.s;
    if (grid.empty()) {
        for (std::size_t k = 0; k < o.count; ++k) {
            grid.push_back(0.99 * (2.0 * static_cast<double>(k + 1) - static_cast<double>(o.count + 1)) /
                           static_cast<double>(o.count + 1));
        }
    }
    for (double s : grid) {
        if (!(std::abs(s) < 1.0)) throw DomainError("linearize: every s must lie in (-1, 1)");
    }

    struct Row {
        double s;
        Spectrum6 eigs;
        std::string type;
        bool ok;
    };
    std::vector<Row> rows;
    bool degenerate = false;
    bool all_ff = true;
    for (double s : grid) {
        const Spectrum6 e = focus_focus_eigs(s);
        std::string type;
        bool ok = std::abs(e[0]) < o.tol_zero && std::abs(e[1]) < o.tol_zero && std::abs(e[2]) >= o.tol_zero;
        try {
            const WilliamsonType w = williamson_type(std::span<const std::complex<double>, 4>(e.data() + 2, 4),
                                                     o.tol_class);
            type = "(" + std::to_string(w.h_e) + "," + std::to_string(w.h_h) + "," + std::to_string(w.h_f) + ")";
            ok = ok && w == WilliamsonType{0, 0, 1};
        } catch (const DegenerateClassificationError& ex) {
            err << "warning: s = " << fmt(s) << ": " << ex.what() << '\n';
            type = "DEGENERATE";
            ok = false;
            degenerate = true;
        }
        all_ff = all_ff && ok;
        rows.push_back({s, e, type, ok});
    }
    const auto golden = golden_check();
    bool golden_pass = true;
    for (const auto& g : golden) golden_pass = golden_pass && g.mismatched == 0;

    std::string text;
    if (o.format == Format::Csv) {
        std::ostringstream os;
        os << "s";
        for (int k = 1; k <= 6; ++k) os << ",re" << k << ",im" << k;
        os << ",type\n";
        for (const auto& r : rows) {
            os << fmt(r.s);
            for (const auto& l : r.eigs) os << ',' << fmt(l.real()) << ',' << fmt(l.imag());
            os << ',' << r.type << '\n';
        }
        text = os.str();
        for (const auto& g : golden) {
            err << "golden " << g.which << " s=" << fmt(g.s) << " max_abs_diff=" << fmt(g.max_abs)
                << " mismatched_entries=" << g.mismatched << '\n';
        }
    } else {
        Json j = header("linearize");
        Json arr = Json::array();
        for (const auto& r : rows) {
            Json row;
            row["s"] = r.s;
            Json ev = Json::array();
            for (const auto& l : r.eigs) ev.push_back(Json::array({l.real(), l.imag()}));
            row["eigenvalues"] = ev;
            row["type"] = r.type;
            arr.push_back(row);
        }
        j["rows"] = arr;
        Json g = Json::array();
        for (const auto& x : golden) {
            g.push_back({{"s", x.s}, {"matrix", x.which}, {"max_abs_diff", x.max_abs}, {"mismatched_entries", x.mismatched}});
        }
        j["golden"] = {{"tol", 1e-12}, {"pass", golden_pass}, {"checks", g}};
        j["pass"] = all_ff;
        text = j.dump(2) + "\n";
    }
    emit(text, o.out, out);
    if (degenerate) return kNumericalFailure;
    return all_ff ? kPass : kAssertionFailure;
}

// ---------------------------------------------------------------- monodromy

struct MonodromyOptions {
    double rho = 0.3;
    double s = 0.0;
    std::size_t steps = 48;
    double center = 1.0;
    bool reverse = false;
    std::uint64_t seed = 7;
    IntegratorConfig integrator;
    std::string out;
};

Json result_json(const MonodromyOptions& o, const MonodromyResult& r, const std::string& status,
                 int expected_abs_m2) {
    Json j = header("monodromy");
    j["status"] = status;
    j["parameters"] = {{"rho", o.rho},
                       {"s", o.s},
                       {"steps", o.steps},
                       {"center", o.center},
                       {"reverse", o.reverse},
                       {"seed", o.seed},
                       {"step", o.integrator.step},
                       {"tol", o.integrator.tol},
                       {"max_step", o.integrator.max_step},
                       {"max_time", o.integrator.max_time}};
    Json loop = Json::array();
    for (const auto& b : r.loop) loop.push_back(to_json(b));
    j["loop"] = loop;
    Json steps = Json::array();
    for (const auto& st : r.steps) steps.push_back({{"b", to_json(st.value)}, {"v", to_json(st.v)}});
    j["steps"] = steps;
    j["m1"] = r.m1;
    j["m2"] = r.m2;
    j["residual"] = r.residual;
    j["period_mismatch"] = r.period_mismatch;
    Json mat = Json::array();
    for (const auto& row : r.matrix) mat.push_back(row);
    j["matrix"] = mat;
    j["expected"] = {{"m1", 0}, {"abs_m2", expected_abs_m2}, {"frame", "(e_h, e_i, v)"}};
    return j;
}

int cmd_monodromy(const MonodromyOptions& o, std::ostream& out, std::ostream& err) {
    o.integrator.validate();
    std::vector<MomentValue> loop = default_loop(o.rho, o.s, o.steps, o.center);
    if (o.reverse) std::reverse(loop.begin() + 1, loop.end());
    // The loop winds once around the critical line iff the line's point (1, s, 0) is inside it.
    const bool links = std::abs(o.s) < 1.0 && std::abs(o.center - 1.0) < o.rho;
    const int expected_abs_m2 = links ? 3 : 0;

    MonodromyResult r;
    std::string status = "ok";
    int code = kPass;
    try {
        r = continue_lattice(loop, o.integrator, o.seed);
    } catch (const InconclusiveError& ex) {
        err << "error: " << ex.what() << '\n';
        r = ex.result();
        status = "inconclusive";
        code = kNumericalFailure;
    } catch (const ContinuationError& ex) {
        err << "error: " << ex.what() << '\n';
        r = ex.partial();
        status = "continuation_failed";
        code = kNumericalFailure;
    }
    if (code == kPass) {
        const bool pass = r.m1 == 0 && std::abs(r.m2) == expected_abs_m2 && r.residual < kQuantizationTolerance;
        if (!pass) {
            err << "assertion failed: measured (m1, m2) = (" << r.m1 << ", " << r.m2 << "), expected m1 = 0 and |m2| = "
                << expected_abs_m2 << '\n';
            code = kAssertionFailure;
        }
    }
    Json j = result_json(o, r, status, expected_abs_m2);
    j["pass"] = code == kPass;
    emit(j.dump(2) + "\n", o.out, out);
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical toolkit for the integrable three-spin chain", "spinchain"};
    app.set_config("--config", "", "TOML/INI file with option values; unknown keys are rejected");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    BracketOptions bo;
    auto* vb = app.add_subcommand("verify-brackets", "Check that H, I, J Poisson commute at random points");
    vb->add_option("--samples", bo.samples, "Number of random points")->check(CLI::PositiveNumber);
    vb->add_option("--seed", bo.seed);
    vb->add_option("--h-min", bo.h_min, "Only sample points with H above this")->check(CLI::NonNegativeNumber);
    vb->add_option("--tol-bracket", bo.tol)->check(CLI::PositiveNumber);
    vb->add_option("--chain-n", bo.chain_n, "Also check the N-spin chain integrals")->check(CLI::Range(3, 1000));
    vb->add_option("--tol-chain", bo.tol_chain)->check(CLI::PositiveNumber);
    vb->add_option("--format", bo.format)->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
    vb->add_option("--out", bo.out, "Output file (default stdout)");

    ImageOptions io;
    auto* im = app.add_subcommand("image", "Sample the moment image and write boundary and slice data");
    im->add_option("--samples", io.samples)->check(CLI::PositiveNumber);
    im->add_option("--seed", io.seed);
    im->add_option("--resolution", io.resolution, "Mesh points per side")->check(CLI::Range(2, 100000));
    im->add_option("--slice", io.slice, "Also write the reduced-image slice at I = s")->check(CLI::Range(-3.0, 3.0));
    im->add_option("--tol-image", io.tol)->check(CLI::PositiveNumber);
    im->add_option("--out", io.out, "Existing output directory (default .)");

    ClassifyOptions co;
    auto* cl = app.add_subcommand("classify", "Rank and critical-set class of one point");
    cl->add_option("point", co.point, "Nine comma-separated reals x1,x2,x3,y1,y2,y3,z1,z2,z3")->required();
    cl->add_option("--tol-norm", co.tol_norm)->check(CLI::PositiveNumber);
    cl->add_option("--format", co.format)->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
    cl->add_option("--out", co.out);

    LinearizeOptions lo;
    auto* li = app.add_subcommand("linearize", "Spectra and Williamson types over the critical line");
    li->add_option("--s", lo.s, "Explicit values of s in (-1, 1)")->delimiter(',');
    li->add_option("--count", lo.count, "Size of the default grid in (-0.99, 0.99)")->check(CLI::PositiveNumber);
    li->add_option("--tol-class", lo.tol_class)->check(CLI::PositiveNumber);
    li->add_option("--tol-zero", lo.tol_zero)->check(CLI::PositiveNumber);
    li->add_option("--format", lo.format)->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
    li->add_option("--out", lo.out);

    MonodromyOptions mo;
    auto* mn = app.add_subcommand("monodromy", "Continue the period lattice around a loop of regular values");
    mn->add_option("--rho", mo.rho)->check(CLI::PositiveNumber);
    mn->add_option("--s", mo.s);
    mn->add_option("--steps", mo.steps, "Loop points")->check(CLI::PositiveNumber);
    mn->add_option("--center", mo.center, "Loop center on the H axis");
    mn->add_flag("--reverse", mo.reverse, "Traverse the loop clockwise");
    mn->add_option("--seed", mo.seed);
    mn->add_option("--step", mo.integrator.step, "Initial integrator step")->check(CLI::PositiveNumber);
    mn->add_option("--max-step", mo.integrator.max_step)->check(CLI::PositiveNumber);
    mn->add_option("--tol,--tol-integrator", mo.integrator.tol)->check(CLI::PositiveNumber);
    mn->add_option("--max-time", mo.integrator.max_time)->check(CLI::PositiveNumber);
    mn->add_option("--out", mo.out);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsageError;
    }

    try {
        if (*vb) return cmd_verify_brackets(bo, out);
        if (*im) return cmd_image(io, out);
        if (*cl) return cmd_classify(co, out);
        if (*li) return cmd_linearize(lo, out, err);
        if (*mn) return cmd_monodromy(mo, out, err);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kUsageError;
}

}  // namespace spinchain::cli
