#include "wes/io.hpp"
#include "wes/wes.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using wes::io::json;

enum Exit : int { Ok = 0, ParseFailure = 1, Invalid = 2, OracleDisagrees = 3, Budget = 4 };

int exit_code_for(wes::ErrorCode code)
{
    switch (code) {
    case wes::ErrorCode::HypothesisViolation:
    case wes::ErrorCode::NotWellDefined:
        return Invalid;
    case wes::ErrorCode::BudgetExceeded:
    case wes::ErrorCode::UnsupportedRank:
        return Budget;
    default:
        return ParseFailure;
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw wes::Error(wes::ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

wes::io::InputDocument load(const std::string& path) { return wes::io::parse_document(read_file(path)); }

std::string matrix_str(const wes::IntMatrix& m)
{
    std::ostringstream os;
    os << m;
    return os.str();
}

/// Scalar when the map is 1x1, matrix otherwise.
std::string map_str(const wes::Homomorphism& f)
{
    const auto& m = f.matrix();
    if (m.rows() == 1 && m.cols() == 1)
        return wes::to_string(m(0, 0));
    return matrix_str(m);
}

std::string tuple_str(const wes::GammaTuple& t)
{
    return "f6 = " + map_str(t.f6) + "  f5 = " + map_str(t.f5) + "  f4 = " + map_str(t.f4) + "  f3 = " + map_str(t.f3);
}

int cmd_validate(const std::string& path, bool as_json)
{
    wes::ValidationReport r;
    try {
        r = wes::validate(wes::io::to_wes_data(load(path)));
    } catch (const wes::Error& e) {
        if (e.code() != wes::ErrorCode::HypothesisViolation)
            throw;
        r.checks.push_back({"H3 ⊗ Z₂ = 0", false, e.message()});
    }
    if (as_json) {
        json checks = json::array();
        for (const auto& c : r.checks)
            checks.push_back(json{{"check", c.name}, {"passed", c.passed}, {"reason", c.reason}});
        std::cout << json{{"valid", r.ok()}, {"checks", checks}}.dump(2) << '\n';
    } else {
        for (const auto& c : r.checks)
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << (c.passed ? "" : ": " + c.reason) << '\n';
        std::cout << (r.ok() ? "valid" : "invalid") << '\n';
    }
    return r.ok() ? Ok : Invalid;
}

int cmd_invariants(const std::string& path, bool as_json)
{
    wes::WesData w = wes::io::to_wes_data(load(path));
    wes::InvariantsReport r = wes::wes_report(w);
    if (as_json) {
        std::cout << wes::io::report_to_json(r).dump(2) << '\n';
        return Ok;
    }
    wes::Gamma5 g5 = wes::gamma5_structure(w.H3, w.H4);
    std::cout << "H3 = " << r.H3.to_string() << '\n'
              << "H4 = " << r.H4.to_string() << '\n'
              << "H5 = " << r.H5.to_string() << '\n'
              << "H6 = " << r.H6.to_string() << '\n'
              << "Gamma5 = " << r.gamma5.to_string() << "  (H4 ⊗ Z2 = " << r.gamma5_tensor.to_string()
              << ", Λ²H3 = " << r.gamma5_wedge.to_string() << ")\n";
    if (g5.summand_count() != r.gamma5.ngens() || !(g5.to_canonical == wes::IntMatrix::identity(g5.summand_count())))
        std::cout << "Gamma5 summands -> canonical generators: " << g5.to_canonical << '\n';
    std::cout << "b6 = " << r.b6 << '\n'
              << "coker b6 = " << r.coker_b6.to_string() << '\n'
              << "Ext(H5, coker b6) = " << r.ext.to_string() << '\n'
              << "pi5 class = " << wes::io::report_to_json(r)["pi5_class"].dump() << ", "
              << (r.pi5_class_split ? "split" : "nonsplit") << '\n'
              << "pi5 = " << r.pi5.to_string() << ", order "
              << (r.pi5_order == 0 ? std::string("infinite") : wes::to_string(r.pi5_order)) << '\n';
    return Ok;
}

int cmd_gamma_group(const std::string& path, bool as_json, std::uint64_t budget, bool oracle, unsigned threads)
{
    wes::WesData w = wes::io::to_wes_data(load(path));
    wes::GammaSpace space(w, budget);
    wes::GroupTable full = wes::gamma_s_group(space, threads);
    if (!full.axioms.ok())
        throw std::logic_error("accepted tuples do not form a group");
    wes::GroupTable top = wes::top_degree_image(space, full);

    static const char* names[] = {"H6", "H5", "H4", "H3"};
    json factors = json::array();
    std::vector<std::string> notes;
    std::ostringstream text;
    for (std::size_t k = 0; k < 4; ++k) {
        const wes::AutFactor& f = space.factor(k);
        wes::GroupTable t = wes::factor_table(space, k);
        text << "aut(" << names[k] << ") = aut(" << f.group.to_string() << "): order " << t.order << ", "
             << t.structure() << '\n';
        factors.push_back(json{{"group", names[k]}, {"order", t.order}, {"structure", t.structure()}});
        if (f.group.ngens() == 1 && t.is_abelian && t.invariant_factors.size() > 1)
            notes.push_back("aut(" + f.group.to_string() + ") = " + t.structure() + " is not cyclic");
    }
    std::size_t exponent = 1;
    for (auto o : top.element_orders)
        exponent = std::lcm(exponent, o);
    if (!notes.empty())
        notes.push_back("the (f6, f5) image " + top.structure() + " has exponent " + std::to_string(exponent));

    std::optional<wes::OracleReport> oracle_report;
    if (oracle)
        oracle_report = wes::oracle_compare(space, budget);

    if (as_json) {
        json j{{"aut_factors", factors},
               {"tuples_examined", space.size()},
               {"gamma_s", wes::io::table_to_json(full, false)},
               {"top_degree_image", wes::io::table_to_json(top, true)},
               {"notes", notes}};
        if (oracle_report)
            j["oracle"] = json{{"tuples", oracle_report->tuples},
                               {"agreements", oracle_report->agreements},
                               {"accepted_by_criterion", oracle_report->accepted_by_criterion},
                               {"accepted_by_oracle", oracle_report->accepted_by_oracle},
                               {"disagreements", oracle_report->disagreements.size()}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << text.str();
        std::cout << "tuples examined: " << space.size() << '\n';
        std::cout << "GammaS: order " << full.order << ", " << full.structure() << '\n';
        std::cout << "generators:\n";
        for (auto g : full.generators)
            std::cout << "  " << tuple_str(full.elements[g]) << '\n';
        std::cout << "(f6, f5) image: order " << top.order << ", " << top.structure() << '\n';
        std::cout << "elements (f6, f5):\n";
        for (const auto& e : top.elements)
            std::cout << "  (" << map_str(e.f6) << ", " << map_str(e.f5) << ")\n";
        for (const auto& n : notes)
            std::cout << "note: " << n << '\n';
        if (oracle_report)
            std::cout << "oracle: " << oracle_report->tuples << " tuples, " << oracle_report->agreements
                      << " agreements, " << oracle_report->disagreements.size() << " disagreements\n";
    }
    if (oracle_report && !oracle_report->ok()) {
        for (const auto& t : oracle_report->disagreements)
            std::cerr << "disagreement: " << tuple_str(space.tuple(t)) << '\n';
        return OracleDisagrees;
    }
    return Ok;
}

int cmd_homology(const std::string& path, bool as_json)
{
    wes::io::InputDocument doc = load(path);
    if (!doc.chain_complex)
        throw wes::Error(wes::ErrorCode::ParseError, "document has no chain_complex block");
    const auto& c = *doc.chain_complex;
    wes::ChainHomology h = wes::homology_of_complex(c.d4, c.d5, c.d6);
    json tmpl{{"H3", wes::io::group_to_json(h.H3)},
              {"H4", wes::io::group_to_json(h.H4)},
              {"H5", wes::io::group_to_json(h.H5)},
              {"H6", wes::io::group_to_json(h.H6)},
              {"b6", nullptr},
              {"pi5_class", nullptr}};
    if (!as_json) {
        std::cout << "H3 = " << h.H3.to_string() << '\n'
                  << "H4 = " << h.H4.to_string() << '\n'
                  << "H5 = " << h.H5.to_string() << '\n'
                  << "H6 = " << h.H6.to_string() << '\n';
        if (wes::satisfies_mod2_hypothesis(h.H3)) {
            wes::FgAbGroup g5 = wes::gamma5(h.H3, h.H4);
            std::cout << "fill in b6 as a " << g5.ngens() << "x" << h.H6.ngens() << " matrix into Gamma5 = "
                      << g5.to_string() << '\n';
        } else {
            std::cout << "H3 ⊗ Z₂ ≠ 0, so Gamma5 is not defined for this complex\n";
        }
        std::cout << "template:\n";
    }
    std::cout << tmpl.dump(2) << '\n';
    return Ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gamma-automorphisms of the Whitehead exact sequence of a 2-connected 6-dimensional complex"};
    app.require_subcommand(1);

    std::string path;
    bool as_json = false;
    std::uint64_t budget = 1'000'000;
    bool oracle = false;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", path, "JSON input document")->required();
        sub->add_flag("--json", as_json, "machine-readable output");
    };
    CLI::App* validate = app.add_subcommand("validate", "check the input against every hypothesis");
    add_common(validate);
    CLI::App* invariants = app.add_subcommand("invariants", "Gamma5, coker b6, Ext and pi5");
    add_common(invariants);
    CLI::App* gamma = app.add_subcommand("gamma-group", "enumerate the group of Gamma-automorphisms");
    add_common(gamma);
    gamma->add_option("--budget", budget, "cap on candidates per automorphism enumeration")->check(CLI::PositiveNumber);
    gamma->add_flag("--oracle", oracle, "cross-check every tuple against the diagram-chasing oracle");
    gamma->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    CLI::App* homology = app.add_subcommand("homology", "homology of the chain_complex block");
    add_common(homology);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? Ok : ParseFailure;
    }

    try {
        if (validate->parsed())
            return cmd_validate(path, as_json);
        if (invariants->parsed())
            return cmd_invariants(path, as_json);
        if (gamma->parsed())
            return cmd_gamma_group(path, as_json, budget, oracle, threads);
        return cmd_homology(path, as_json);
    } catch (const wes::Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ParseFailure;
    }
}
