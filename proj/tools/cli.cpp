#include "cli.hpp"

#include "sqkit/element_json.hpp"
#include "sqkit/error.hpp"
#include "sqkit/hit.hpp"
#include "sqkit/homotopy.hpp"
#include "sqkit/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sqkit::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct Config
{
    std::string cache_dir;
    int max_k = 4;
    std::uint64_t max_dim = 200000;
    std::string format = "text";
};

struct PieceArgs
{
    std::string kind = "gamma";
    int s = 1;
    int d = 1;
    std::optional<int> lo;
    std::optional<int> hi;
};

struct RangeArgs
{
    std::string kind = "gamma";
    int s_min = 1;
    int s_max = 3;
    int d_min = 1;
    int d_max = 10;
    std::optional<int> lo;
    std::optional<int> hi;
};

void add_piece_options(CLI::App* cmd, PieceArgs& a)
{
    cmd->add_option("--kind", a.kind, "gamma, nabla, gamma-sym or gamma-cyc")->capture_default_str();
    cmd->add_option("--s", a.s, "arity")->required();
    cmd->add_option("--d", a.d, "degree")->required();
    cmd->add_option("--lo", a.lo, "nabla window: smallest entry");
    cmd->add_option("--hi", a.hi, "nabla window: largest entry");
}

void add_range_options(CLI::App* cmd, RangeArgs& a)
{
    cmd->add_option("--kind", a.kind, "gamma, nabla, gamma-sym or gamma-cyc")->capture_default_str();
    cmd->add_option("--s-min", a.s_min)->capture_default_str();
    cmd->add_option("--s-max", a.s_max)->capture_default_str();
    cmd->add_option("--d-min", a.d_min)->capture_default_str();
    cmd->add_option("--d-max", a.d_max)->capture_default_str();
    cmd->add_option("--lo", a.lo, "nabla window: smallest entry");
    cmd->add_option("--hi", a.hi, "nabla window: largest entry");
}

std::optional<hit::Window> window_of(ModuleKind kind, std::optional<int> lo, std::optional<int> hi)
{
    if (kind != ModuleKind::Nabla) {
        if (lo || hi)
            throw InvalidArgument("--lo/--hi only apply to nabla");
        return std::nullopt;
    }
    const hit::Window w{lo.value_or(-4), hi.value_or(4)};
    if (w.lo > w.hi)
        throw InvalidArgument("empty window: lo > hi");
    return w;
}

hit::Piece make_piece(const PieceArgs& a)
{
    const ModuleKind kind = parse_kind(a.kind);
    if (a.s < 0 || (a.d < 0 && kind != ModuleKind::Nabla))
        throw InvalidArgument("invalid bidegree (" + std::to_string(a.s) + "," + std::to_string(a.d) + ")");
    if (kind == ModuleKind::Nabla)
        return hit::Piece::nabla({a.s, a.d}, *window_of(kind, a.lo, a.hi));
    window_of(kind, a.lo, a.hi);
    return hit::Piece::gamma_family(kind, {a.s, a.d});
}

void check_k(int k, const Config& cfg)
{
    if (k < 0)
        throw InvalidArgument("k must be non-negative");
    if (k > cfg.max_k)
        throw GuardrailExceeded("k = " + std::to_string(k) + " exceeds max_k = " + std::to_string(cfg.max_k));
}

std::string read_input(const std::string& path)
{
    std::ostringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidArgument("cannot open " + path);
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text << '\n';
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw InvalidArgument("cannot write " + path);
    f << text << '\n';
}

ojson element_ojson(const Element& x)
{
    return ojson::parse(to_json(x));
}

ojson piece_ojson(const hit::Piece& p)
{
    ojson j;
    j["kind"] = std::string(to_string(p.kind));
    j["s"] = p.b.s;
    j["d"] = p.b.d;
    if (p.window) {
        j["lo"] = p.window->lo;
        j["hi"] = p.window->hi;
    }
    return j;
}

void print_subspace(const std::string& label, const hit::Piece& piece, int k, const f2::Subspace& sub, hit::MatrixCache& cache,
                    const Config& cfg, std::ostream& out)
{
    const hit::GradedBasis& basis = cache.basis(piece);
    if (cfg.format == "json") {
        ojson j = piece_ojson(piece);
        j["k"] = k;
        j["dim_" + label] = sub.dim();
        ojson elems = ojson::array();
        for (const auto& v : sub.basis())
            elems.push_back(element_ojson(basis.to_element(v)));
        j["basis"] = std::move(elems);
        out << j.dump() << '\n';
        return;
    }
    out << label << "(" << k << ") at " << piece.describe() << ": dim " << sub.dim() << '\n';
    for (const auto& v : sub.basis())
        out << "  " << basis.to_element(v).to_string() << '\n';
}

int cmd_basis(const PieceArgs& a, bool count, bool json, const Config& cfg, hit::MatrixCache& cache, std::ostream& out)
{
    const hit::Piece piece = make_piece(a);
    if (count && piece.kind == ModuleKind::Gamma) {
        if (a.d < a.s || a.s < 0)
            out << 0 << '\n';
        else
            out << basis_size(piece.b, piece.kind) << '\n';
        return kOk;
    }
    const hit::GradedBasis& basis = cache.basis(piece);
    if (count) {
        out << basis.size() << '\n';
        return kOk;
    }
    if (json || cfg.format == "json") {
        ojson j = piece_ojson(piece);
        ojson ms = ojson::array();
        for (const auto& e : basis.monomials())
            ms.push_back(e);
        j["monomials"] = std::move(ms);
        out << j.dump() << '\n';
        return kOk;
    }
    std::string line;
    for (const auto& e : basis.monomials()) {
        if (!line.empty())
            line += ' ';
        line += format_monomial(piece.kind, e);
    }
    out << line << '\n';
    return kOk;
}

void csv_row(std::ostream& out, const hit::DeltaReport& r)
{
    out << to_string(r.piece.kind) << ',' << r.piece.b.s << ',' << r.piece.b.d << ',' << r.k << ',' << r.dim_delta << ','
        << r.dim_image << ',' << r.dim_unhit << ',' << (r.degenerate ? "true" : "false") << '\n';
}

ojson report_ojson(const hit::DeltaReport& r)
{
    ojson j;
    j["kind"] = std::string(to_string(r.piece.kind));
    j["s"] = r.piece.b.s;
    j["d"] = r.piece.b.d;
    j["k"] = r.k;
    j["dim_delta"] = r.dim_delta;
    j["dim_image"] = r.dim_image;
    j["dim_unhit"] = r.dim_unhit;
    j["degenerate"] = r.degenerate;
    if (r.piece.window) {
        j["lo"] = r.piece.window->lo;
        j["hi"] = r.piece.window->hi;
    }
    if (!r.witnesses.empty()) {
        ojson w = ojson::array();
        for (const auto& x : r.witnesses)
            w.push_back(element_ojson(x));
        j["witnesses"] = std::move(w);
    }
    return j;
}

int cmd_unhit(const PieceArgs& a, int k, bool witnesses, const Config& cfg, hit::MatrixCache& cache, std::ostream& out)
{
    check_k(k, cfg);
    const auto r = hit::unhit_report(make_piece(a), k, witnesses, cache);
    if (cfg.format == "json") {
        out << report_ojson(r).dump() << '\n';
    }
    else if (cfg.format == "csv") {
        out << "kind,s,d,k,dim_delta,dim_image,dim_unhit,degenerate\n";
        csv_row(out, r);
    }
    else {
        out << "U(" << k << ") at " << r.piece.describe() << ": dim_delta " << r.dim_delta << ", dim_image " << r.dim_image
            << ", dim_unhit " << r.dim_unhit << (r.degenerate ? " (degenerate)" : "") << '\n';
        for (const auto& x : r.witnesses)
            out << "  " << x.to_string() << '\n';
    }
    return kOk;
}

int cmd_report(const RangeArgs& a, int k, const Config& cfg, hit::MatrixCache& cache, std::ostream& out)
{
    check_k(k, cfg);
    const ModuleKind kind = parse_kind(a.kind);
    const auto window = window_of(kind, a.lo, a.hi);
    if (a.s_min < 0 || (a.d_min < 0 && kind != ModuleKind::Nabla))
        throw InvalidArgument("ranges must be non-negative");
    std::vector<hit::DeltaReport> rows;
    for (int s = a.s_min; s <= a.s_max; ++s) {
        for (int d = a.d_min; d <= a.d_max; ++d) {
            const hit::Piece piece = kind == ModuleKind::Nabla ? hit::Piece::nabla({s, d}, *window) : hit::Piece::gamma_family(kind, {s, d});
            rows.push_back(hit::unhit_report(piece, k, false, cache));
        }
    }
    if (cfg.format == "json") {
        ojson arr = ojson::array();
        for (const auto& r : rows)
            arr.push_back(report_ojson(r));
        out << arr.dump() << '\n';
        return kOk;
    }
    out << "kind,s,d,k,dim_delta,dim_image,dim_unhit,degenerate\n";
    for (const auto& r : rows)
        csv_row(out, r);
    return kOk;
}

int cmd_explore(const RangeArgs& a, int l, const Config& cfg, hit::MatrixCache& cache, std::ostream& out)
{
    if (l < 0)
        throw InvalidArgument("l must be non-negative");
    const ModuleKind kind = parse_kind(a.kind);
    const auto window = window_of(kind, a.lo, a.hi);
    const auto rows = hit::ker_vs_im_explorer(l, a.s_min, a.s_max, a.d_min, a.d_max, kind, window, cache);
    if (cfg.format == "json") {
        ojson arr = ojson::array();
        for (const auto& r : rows) {
            ojson j = piece_ojson(r.piece);
            j["l"] = r.l;
            j["dim_ker"] = r.dim_ker;
            j["dim_im"] = r.dim_im;
            j["dim_meet"] = r.dim_meet;
            j["ker_in_im"] = r.ker_in_im;
            j["im_in_ker"] = r.im_in_ker;
            ojson w = ojson::array();
            for (const auto& x : r.ker_not_im)
                w.push_back(element_ojson(x));
            j["ker_not_im"] = std::move(w);
            arr.push_back(std::move(j));
        }
        out << arr.dump() << '\n';
        return kOk;
    }
    out << "kind,s,d,l,dim_ker,dim_im,dim_meet,ker_in_im,im_in_ker\n";
    for (const auto& r : rows) {
        out << to_string(r.piece.kind) << ',' << r.piece.b.s << ',' << r.piece.b.d << ',' << r.l << ',' << r.dim_ker << ',' << r.dim_im
            << ',' << r.dim_meet << ',' << (r.ker_in_im ? "true" : "false") << ',' << (r.im_in_ker ? "true" : "false") << '\n';
    }
    return kOk;
}

int cmd_verify(const std::vector<std::string>& suites, std::uint64_t seed, hit::MatrixCache& cache, std::ostream& out)
{
    std::vector<std::string> names;
    for (const auto& s : suites) {
        if (s == "all") {
            names.insert(names.end(), verify::suite_names().begin(), verify::suite_names().end());
            continue;
        }
        if (std::find(verify::suite_names().begin(), verify::suite_names().end(), s) == verify::suite_names().end())
            throw InvalidArgument("unknown suite '" + s + "'");
        names.push_back(s);
    }
    ojson summary;
    summary["seed"] = seed;
    ojson arr = ojson::array();
    bool passed = true;
    std::optional<Element> counterexample;
    for (const auto& name : names) {
        const verify::SuiteResult r = verify::run_suite(name, seed, cache);
        ojson j;
        j["name"] = r.name;
        j["checks"] = r.checks;
        j["failures"] = r.failures;
        j["passed"] = r.passed();
        if (!r.passed()) {
            j["first_failure"] = r.first_failure;
            if (passed && r.counterexample)
                counterexample = r.counterexample;
            passed = false;
        }
        arr.push_back(std::move(j));
    }
    summary["suites"] = std::move(arr);
    summary["passed"] = passed;
    out << summary.dump() << '\n';
    if (passed)
        return kOk;
    if (counterexample)
        out << to_json(*counterexample) << '\n';
    return kVerifyFailed;
}

int cmd_preimage(const std::string& in, int k, const std::optional<std::string>& kind, int position, bool relaxed_cyclic,
                 const std::string& prefix, const Config& cfg, std::ostream& out)
{
    check_k(k, cfg);
    const Element x = element_from_json(read_input(in));
    if (kind && parse_kind(*kind) != x.kind())
        throw InvalidArgument("--kind " + *kind + " does not match the element kind " + std::string(to_string(x.kind())));
    if (x.kind() != ModuleKind::Nabla && basis_size(x.bidegree(), x.kind()) > cfg.max_dim)
        throw GuardrailExceeded("basis size at (" + std::to_string(x.arity()) + "," + std::to_string(x.degree()) + ") exceeds max_dim = " +
                                std::to_string(cfg.max_dim));
    homotopy::HomotopySystem h(x.kind(), k, position);
    h.strict_cyclic_margin = !relaxed_cyclic;
    const auto chain = homotopy::preimage_chain(x, h);
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const int l = (2 << i) - 1;
        if (sq(chain[i], l) != x)
            throw InternalInconsistency("y_" + std::to_string(i) + " Sq^" + std::to_string(l) + " != x");
        const std::string path = prefix + "_y" + std::to_string(i) + ".json";
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw InvalidArgument("cannot write " + path);
        f << to_json(chain[i]) << '\n';
        out << path << ": y_" << i << " Sq^" << l << " = x verified\n";
    }
    return kOk;
}

int cmd_cache(bool clear, const Config& cfg, std::ostream& out)
{
    if (cfg.cache_dir.empty())
        throw InvalidArgument("no cache directory configured (use --cache-dir or SQKIT_CACHE_DIR)");
    const fs::path dir(cfg.cache_dir);
    std::size_t files = 0;
    std::uintmax_t bytes = 0;
    std::vector<fs::path> found;
    if (fs::exists(dir)) {
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".sqmx") {
                ++files;
                bytes += entry.file_size();
                found.push_back(entry.path());
            }
        }
    }
    if (clear) {
        for (const auto& p : found)
            fs::remove(p);
        out << "removed " << files << " files from " << dir.string() << '\n';
        return kOk;
    }
    out << "directory " << dir.string() << '\n' << "files " << files << '\n' << "bytes " << bytes << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"sqkit: Steenrod squares on monomial modules over F_2"};
    app.set_config("--config", "", "key=value file with global options");
    app.require_subcommand(1);
    app.allow_config_extras(false);

    Config cfg;
    app.add_option("--cache-dir", cfg.cache_dir, "directory for persisted matrices")->envname("SQKIT_CACHE_DIR");
    app.add_option("--max-k", cfg.max_k, "largest accepted order k")->capture_default_str()->check(CLI::NonNegativeNumber);
    app.add_option("--max-dim", cfg.max_dim, "largest accepted basis size")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--format", cfg.format, "text, json or csv")->capture_default_str()->check(CLI::IsMember({"text", "json", "csv"}));

    PieceArgs piece;
    RangeArgs range;
    int k = 0;
    int l = 0;

    auto* basis_cmd = app.add_subcommand("basis", "list the monomial basis of a bidegree");
    bool count = false, json = false;
    add_piece_options(basis_cmd, piece);
    basis_cmd->add_flag("--count", count, "print only the dimension");
    basis_cmd->add_flag("--json", json, "print JSON");

    auto* sq_cmd = app.add_subcommand("sq", "apply Sq^l to an element");
    std::string in_path = "-", out_path;
    sq_cmd->add_option("--in", in_path, "element JSON file, - for stdin")->capture_default_str();
    sq_cmd->add_option("--l", l, "square index")->required()->check(CLI::NonNegativeNumber);
    sq_cmd->add_option("--out", out_path, "output file (default stdout)");

    bool witnesses = false;
    auto* delta_cmd = app.add_subcommand("delta", "basis of Delta(k)");
    add_piece_options(delta_cmd, piece);
    delta_cmd->add_option("--k", k)->required();
    auto* image_cmd = app.add_subcommand("image", "basis of I(k)");
    add_piece_options(image_cmd, piece);
    image_cmd->add_option("--k", k)->required();
    auto* unhit_cmd = app.add_subcommand("unhit", "dimension of U(k) = Delta(k)/I(k)");
    add_piece_options(unhit_cmd, piece);
    unhit_cmd->add_option("--k", k)->required();
    unhit_cmd->add_flag("--witnesses", witnesses, "list representatives of a basis of U(k)");

    auto* report_cmd = app.add_subcommand("report", "table of U(k) dimensions");
    add_range_options(report_cmd, range);
    report_cmd->add_option("--k", k)->required();

    auto* verify_cmd = app.add_subcommand("verify", "run property suites");
    std::vector<std::string> suites{"all"};
    std::uint64_t seed = 1;
    verify_cmd->add_option("--suite", suites, "suite name or all (repeatable)");
    verify_cmd->add_option("--seed", seed)->capture_default_str();

    auto* pre_cmd = app.add_subcommand("preimage", "constructive preimages y_i of x under Sq^{2^{i+1}-1}");
    std::optional<std::string> pre_kind;
    int position = 1;
    bool relaxed_cyclic = false;
    std::string prefix = "preimage";
    pre_cmd->add_option("--in", in_path, "element JSON file, - for stdin")->capture_default_str();
    pre_cmd->add_option("--k", k)->required();
    pre_cmd->add_option("--kind", pre_kind, "expected element kind");
    pre_cmd->add_option("--position", position, "shifted tensor position")->capture_default_str();
    pre_cmd->add_flag("--relaxed-cyclic", relaxed_cyclic, "gamma-cyc: use the margin a_1 - a_j >= 2^k");
    pre_cmd->add_option("--out-prefix", prefix, "files are written as <prefix>_y<i>.json")->capture_default_str();

    auto* explore_cmd = app.add_subcommand("explore-ker-im", "compare ker Sq^l and im Sq^l");
    add_range_options(explore_cmd, range);
    explore_cmd->add_option("--l", l)->required();

    auto* cache_cmd = app.add_subcommand("cache", "manage the matrix cache directory");
    cache_cmd->require_subcommand(1);
    auto* cache_clear = cache_cmd->add_subcommand("clear", "delete cached matrices");
    cache_cmd->add_subcommand("stat", "count cached matrices");

    std::vector<std::string> argv_store{"sqkit"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store)
        argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        hit::MatrixCache cache(cfg.cache_dir, cfg.max_dim);
        if (*basis_cmd)
            return cmd_basis(piece, count, json, cfg, cache, out);
        if (*sq_cmd) {
            const Element x = element_from_json(read_input(in_path));
            write_output(out_path, to_json(sq(x, l)), out);
            return kOk;
        }
        if (*delta_cmd || *image_cmd) {
            check_k(k, cfg);
            const hit::Piece p = make_piece(piece);
            if (*delta_cmd)
                print_subspace("delta", p, k, hit::delta_basis(p, k, cache), cache, cfg, out);
            else
                print_subspace("image", p, k, hit::spike_image_basis(p, k, cache), cache, cfg, out);
            return kOk;
        }
        if (*unhit_cmd)
            return cmd_unhit(piece, k, witnesses, cfg, cache, out);
        if (*report_cmd)
            return cmd_report(range, k, cfg, cache, out);
        if (*verify_cmd)
            return cmd_verify(suites, seed, cache, out);
        if (*pre_cmd)
            return cmd_preimage(in_path, k, pre_kind, position, relaxed_cyclic, prefix, cfg, out);
        if (*explore_cmd)
            return cmd_explore(range, l, cfg, cache, out);
        if (*cache_cmd)
            return cmd_cache(cache_clear->parsed(), cfg, out);
    }
    catch (const NotInNullSubspace& e) {
        err << "error: " << e.what() << '\n';
        return kPreimageRejected;
    }
    catch (const NotInDelta& e) {
        err << "error: " << e.what() << " (failing i = " << e.failing_index << ")\n";
        return kPreimageRejected;
    }
    catch (const GuardrailExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kGuardrail;
    }
    catch (const InternalInconsistency& e) {
        err << "internal error: " << e.what() << '\n';
        return kVerifyFailed;
    }
    catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kBadInput;
}

}  // namespace sqkit::cli
