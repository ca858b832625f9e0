#pragma once

// JSON reading and writing of input documents and reports. Uses nlohmann/json
// from vendor/.

#include "wes/gamma_enum.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace wes::io {

using json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what)
{
    throw Error(ErrorCode::ParseError, where + ": " + what);
}

} // namespace detail

/// Integers are written as JSON numbers when they fit in 64 bits and as
/// decimal strings otherwise; both forms are accepted on input.
inline json integer_to_json(const Integer& v)
{
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return json(static_cast<std::int64_t>(v));
    return json(to_string(v));
}

inline Integer integer_from_json(const json& j, const std::string& where)
{
    if (j.is_number_integer())
        return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
        if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
            detail::parse_fail(where, "'" + s + "' is not an integer");
        return Integer(s);
    }
    detail::parse_fail(where, "expected an integer, got " + std::string(j.type_name()));
}

inline std::vector<Integer> vector_from_json(const json& j, const std::string& where)
{
    if (!j.is_array())
        detail::parse_fail(where, "expected an array of integers");
    std::vector<Integer> v;
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(integer_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

inline json vector_to_json(const std::vector<Integer>& v)
{
    json j = json::array();
    for (const auto& x : v)
        j.push_back(integer_to_json(x));
    return j;
}

inline json group_to_json(const FgAbGroup& G)
{
    return json{{"rank", G.rank()}, {"torsion", vector_to_json(G.torsion())}};
}

/// {"rank": r, "torsion": [d1, ..., dk]} with d1 | d2 | ... | dk, each >= 2.
inline FgAbGroup group_from_json(const json& j, const std::string& where)
{
    if (!j.is_object())
        detail::parse_fail(where, "expected an object with rank and torsion");
    std::size_t rank = 0;
    if (j.contains("rank")) {
        if (!j["rank"].is_number_unsigned() && !(j["rank"].is_number_integer() && j["rank"].get<std::int64_t>() >= 0))
            detail::parse_fail(where + ".rank", "expected a non-negative integer");
        rank = j["rank"].get<std::size_t>();
    }
    std::vector<Integer> torsion;
    if (j.contains("torsion"))
        torsion = vector_from_json(j["torsion"], where + ".torsion");
    for (const auto& key : j.items())
        if (key.key() != "rank" && key.key() != "torsion")
            detail::parse_fail(where, "unknown key '" + key.key() + "'");
    try {
        return FgAbGroup(std::move(torsion), rank);
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, where + ": " + e.message());
    }
}

inline json matrix_to_json(const IntMatrix& M)
{
    json rows = json::array();
    for (std::size_t i = 0; i < M.rows(); ++i)
        rows.push_back(vector_to_json(M.row(i)));
    return rows;
}

/// Either a list of rows or {"rows", "cols", "entries"} with entries in
/// row-major order. A list of rows needs `cols` when it is empty.
inline IntMatrix matrix_from_json(const json& j, const std::string& where, std::optional<std::size_t> cols = {})
{
    if (j.is_object()) {
        for (const char* k : {"rows", "cols", "entries"})
            if (!j.contains(k))
                detail::parse_fail(where, std::string("missing '") + k + "'");
        if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
            detail::parse_fail(where, "rows and cols must be non-negative integers");
        std::size_t r = j["rows"].get<std::size_t>(), c = j["cols"].get<std::size_t>();
        auto entries = vector_from_json(j["entries"], where + ".entries");
        if (entries.size() != r * c)
            detail::parse_fail(where, "expected " + std::to_string(r * c) + " entries, got " +
                                          std::to_string(entries.size()));
        IntMatrix M(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < c; ++k)
                M(i, k) = entries[i * c + k];
        return M;
    }
    if (!j.is_array())
        detail::parse_fail(where, "expected a matrix");
    if (j.empty()) {
        if (!cols)
            detail::parse_fail(where, "empty row list needs the {rows, cols, entries} form");
        return IntMatrix(0, *cols);
    }
    std::size_t c = 0;
    std::vector<std::vector<Integer>> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        rows.push_back(vector_from_json(j[i], where + "[" + std::to_string(i) + "]"));
        if (i == 0)
            c = rows[0].size();
        else if (rows[i].size() != c)
            detail::parse_fail(where, "ragged rows");
    }
    IntMatrix M(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < c; ++k)
            M(i, k) = rows[i][k];
    return M;
}

struct ChainComplexInput {
    IntMatrix d4, d5, d6;
};

/// The input file. Groups may come from a chain complex instead of being
/// listed; b6 and pi5_class may be absent for subcommands that ignore them.
struct InputDocument {
    std::optional<FgAbGroup> H3, H4, H5, H6;
    std::optional<json> b6;
    std::optional<json> pi5_class;
    std::optional<ChainComplexInput> chain_complex;
};

inline ChainComplexInput chain_complex_from_json(const json& j)
{
    if (!j.is_object())
        detail::parse_fail("chain_complex", "expected an object with d4, d5, d6");
    for (const char* k : {"d4", "d5", "d6"})
        if (!j.contains(k))
            detail::parse_fail("chain_complex", std::string("missing '") + k + "'");
    // d4 fixes C4; d5 then fixes C5
    IntMatrix d4 = matrix_from_json(j["d4"], "chain_complex.d4");
    IntMatrix d5 = matrix_from_json(j["d5"], "chain_complex.d5", d4.cols());
    IntMatrix d6 = matrix_from_json(j["d6"], "chain_complex.d6", d5.cols());
    return {std::move(d4), std::move(d5), std::move(d6)};
}

inline InputDocument parse_document(const json& j)
{
    if (!j.is_object())
        detail::parse_fail("document", "expected a JSON object");
    InputDocument doc;
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        if (k == "H3")
            doc.H3 = group_from_json(item.value(), k);
        else if (k == "H4")
            doc.H4 = group_from_json(item.value(), k);
        else if (k == "H5")
            doc.H5 = group_from_json(item.value(), k);
        else if (k == "H6")
            doc.H6 = group_from_json(item.value(), k);
        else if (k == "b6") {
            if (!item.value().is_null())
                doc.b6 = item.value();
        } else if (k == "pi5_class") {
            if (!item.value().is_null())
                doc.pi5_class = item.value();
        } else if (k == "chain_complex")
            doc.chain_complex = chain_complex_from_json(item.value());
        else if (k != "comment")
            detail::parse_fail("document", "unknown key '" + k + "'");
    }
    return doc;
}

inline InputDocument parse_document(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return parse_document(j);
}

/// H3..H6 of the document, taking the chain complex's homology for any group
/// not listed and checking agreement for the ones that are.
inline ChainHomology document_groups(const InputDocument& doc)
{
    std::optional<ChainHomology> h;
    if (doc.chain_complex)
        h = homology_of_complex(doc.chain_complex->d4, doc.chain_complex->d5, doc.chain_complex->d6);
    auto pick = [&](const std::optional<FgAbGroup>& listed, const FgAbGroup* computed, const char* name) {
        if (listed && computed && !(*listed == *computed))
            throw Error(ErrorCode::ShapeMismatch, std::string(name) + " = " + listed->to_string() +
                                                      " disagrees with the chain complex homology " +
                                                      computed->to_string());
        if (listed)
            return *listed;
        if (computed)
            return *computed;
        throw Error(ErrorCode::ParseError, std::string("document: missing '") + name + "'");
    };
    ChainHomology out;
    out.H3 = pick(doc.H3, h ? &h->H3 : nullptr, "H3");
    out.H4 = pick(doc.H4, h ? &h->H4 : nullptr, "H4");
    out.H5 = pick(doc.H5, h ? &h->H5 : nullptr, "H5");
    out.H6 = pick(doc.H6, h ? &h->H6 : nullptr, "H6");
    return out;
}

/// WesData of a document. b6 rows are canonical Gamma5 generators, columns
/// are H6 generators. b6 is taken as given even when it is not well-defined,
/// so that validate can report it.
inline WesData to_wes_data(const InputDocument& doc)
{
    ChainHomology g = document_groups(doc);
    if (!doc.b6)
        detail::parse_fail("document", "missing 'b6'");
    if (!doc.pi5_class)
        detail::parse_fail("document", "missing 'pi5_class'");
    FgAbGroup g5 = gamma5(g.H3, g.H4);
    IntMatrix b6 = matrix_from_json(*doc.b6, "b6", g.H6.ngens());
    if (b6.rows() != g5.ngens() || b6.cols() != g.H6.ngens())
        throw Error(ErrorCode::ShapeMismatch, "b6 must be " + std::to_string(g5.ngens()) + "x" +
                                                  std::to_string(g.H6.ngens()) + " (Gamma5 = " + g5.to_string() +
                                                  ", H6 = " + g.H6.to_string() + "), got " +
                                                  std::to_string(b6.rows()) + "x" + std::to_string(b6.cols()));
    Homomorphism b6_map = Homomorphism::unchecked(g.H6, g5, b6);
    FgAbGroup coker = cokernel(b6_map).group;

    const json& cj = *doc.pi5_class;
    if (!cj.is_array())
        detail::parse_fail("pi5_class", "expected a list of coordinate vectors");
    std::vector<std::vector<Integer>> comps;
    for (std::size_t i = 0; i < cj.size(); ++i)
        comps.push_back(vector_from_json(cj[i], "pi5_class[" + std::to_string(i) + "]"));
    if (comps.size() != g.H5.torsion_count())
        throw Error(ErrorCode::ShapeMismatch, "pi5_class needs " + std::to_string(g.H5.torsion_count()) +
                                                  " components (one per torsion factor of H5 = " + g.H5.to_string() +
                                                  "), got " + std::to_string(comps.size()));
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (comps[i].size() != coker.ngens())
            throw Error(ErrorCode::ShapeMismatch, "pi5_class[" + std::to_string(i) + "] needs " +
                                                      std::to_string(coker.ngens()) +
                                                      " coordinates over coker b6 = " + coker.to_string() + ", got " +
                                                      std::to_string(comps[i].size()));
    return WesData{g.H3, g.H4, g.H5, g.H6, b6_map, ExtClass::from_coords(g.H5, coker, comps)};
}

inline json document_to_json(const WesData& w)
{
    json cls = json::array();
    for (const auto& c : w.pi5_class.coords())
        cls.push_back(vector_to_json(c.coords));
    return json{{"H3", group_to_json(w.H3)}, {"H4", group_to_json(w.H4)}, {"H5", group_to_json(w.H5)},
                {"H6", group_to_json(w.H6)}, {"b6", matrix_to_json(w.b6.matrix())}, {"pi5_class", cls}};
}

inline json report_to_json(const InvariantsReport& r)
{
    json cls = json::array();
    for (const auto& c : r.pi5_class)
        cls.push_back(vector_to_json(c));
    return json{{"H3", group_to_json(r.H3)},
                {"H4", group_to_json(r.H4)},
                {"H5", group_to_json(r.H5)},
                {"H6", group_to_json(r.H6)},
                {"gamma5", group_to_json(r.gamma5)},
                {"gamma5_tensor_part", group_to_json(r.gamma5_tensor)},
                {"gamma5_wedge_part", group_to_json(r.gamma5_wedge)},
                {"b6", matrix_to_json(r.b6)},
                {"coker_b6", group_to_json(r.coker_b6)},
                {"coker_b6_projection", matrix_to_json(r.coker_projection)},
                {"ext", group_to_json(r.ext)},
                {"pi5_class", cls},
                {"pi5_class_ext_coords", vector_to_json(r.pi5_class_ext_coords)},
                {"pi5_class_split", r.pi5_class_split},
                {"pi5", group_to_json(r.pi5)},
                {"pi5_order", integer_to_json(r.pi5_order)}};
}

inline InvariantsReport report_from_json(const json& j)
{
    auto at = [&](const char* k) -> const json& {
        if (!j.contains(k))
            detail::parse_fail("report", std::string("missing '") + k + "'");
        return j[k];
    };
    InvariantsReport r;
    r.H3 = group_from_json(at("H3"), "H3");
    r.H4 = group_from_json(at("H4"), "H4");
    r.H5 = group_from_json(at("H5"), "H5");
    r.H6 = group_from_json(at("H6"), "H6");
    r.gamma5 = group_from_json(at("gamma5"), "gamma5");
    r.gamma5_tensor = group_from_json(at("gamma5_tensor_part"), "gamma5_tensor_part");
    r.gamma5_wedge = group_from_json(at("gamma5_wedge_part"), "gamma5_wedge_part");
    r.b6 = matrix_from_json(at("b6"), "b6", r.H6.ngens());
    r.coker_b6 = group_from_json(at("coker_b6"), "coker_b6");
    r.coker_projection = matrix_from_json(at("coker_b6_projection"), "coker_b6_projection", r.gamma5.ngens());
    r.ext = group_from_json(at("ext"), "ext");
    for (const auto& c : at("pi5_class"))
        r.pi5_class.push_back(vector_from_json(c, "pi5_class"));
    r.pi5_class_ext_coords = vector_from_json(at("pi5_class_ext_coords"), "pi5_class_ext_coords");
    if (!at("pi5_class_split").is_boolean())
        detail::parse_fail("pi5_class_split", "expected a boolean");
    r.pi5_class_split = at("pi5_class_split").get<bool>();
    r.pi5 = group_from_json(at("pi5"), "pi5");
    r.pi5_order = integer_from_json(at("pi5_order"), "pi5_order");
    return r;
}

inline json tuple_to_json(const GammaTuple& t)
{
    return json{{"f6", matrix_to_json(t.f6.matrix())},
                {"f5", matrix_to_json(t.f5.matrix())},
                {"f4", matrix_to_json(t.f4.matrix())},
                {"f3", matrix_to_json(t.f3.matrix())}};
}

inline json table_to_json(const GroupTable& t, bool with_elements)
{
    json j{{"order", t.order},
           {"abelian", t.is_abelian},
           {"structure", t.structure()},
           {"invariant_factors", vector_to_json(t.invariant_factors)}};
    json gens = json::array();
    for (auto g : t.generators)
        gens.push_back(tuple_to_json(t.elements[g]));
    j["generators"] = gens;
    if (with_elements) {
        json els = json::array();
        for (const auto& e : t.elements)
            els.push_back(tuple_to_json(e));
        j["elements"] = els;
    }
    std::ostringstream hash;
    hash << "0x" << std::hex << t.table_hash;
    j["table_hash"] = hash.str();
    return j;
}

} // namespace wes::io
