#include "sqkit/element_json.hpp"

#include "sqkit/error.hpp"

#include <json.hpp>

namespace sqkit {

using ordered_json = nlohmann::ordered_json;

std::string to_json(const Element& x)
{
    ordered_json j;
    j["kind"] = to_string(x.kind());
    j["s"] = x.arity();
    j["d"] = x.degree();
    j["monomials"] = ordered_json::array();
    for (const auto& t : x.terms())
        j["monomials"].push_back(t);
    return j.dump();
}

Element element_from_json(std::string_view text)
{
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("element JSON: ") + e.what());
    }
    try {
        if (!j.is_object())
            throw FormatError("element JSON: expected an object");
        for (const char* key : {"kind", "s", "d", "monomials"}) {
            if (!j.contains(key))
                throw FormatError(std::string("element JSON: missing key '") + key + "'");
        }
        if (!j["s"].is_number_integer() || !j["d"].is_number_integer())
            throw FormatError("element JSON: 's' and 'd' must be integers");
        if (!j["monomials"].is_array())
            throw FormatError("element JSON: 'monomials' must be an array");

        const ModuleKind kind = parse_kind(j["kind"].get<std::string>());
        const int s = j["s"].get<int>();
        const int d = j["d"].get<int>();
        if (s < 0)
            throw FormatError("element JSON: negative arity");

        Element x(kind, s, d);
        for (const auto& m : j["monomials"]) {
            if (!m.is_array() || !std::all_of(m.begin(), m.end(), [](const auto& v) { return v.is_number_integer(); }))
                throw FormatError("element JSON: each monomial must be an array of integers");
            Entries e = m.get<Entries>();
            if (kind == ModuleKind::GammaSym)
                e = canonical_sym_entries(std::move(e));
            else if (kind == ModuleKind::GammaCyc)
                e = canonical_cyc_entries(e);
            x.toggle(std::move(e));
        }
        return x;
    }
    catch (const InvalidArgument& e) {
        throw FormatError(std::string("element JSON: ") + e.what());
    }
    catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("element JSON: ") + e.what());
    }
}

}  // namespace sqkit
