#pragma once

#include <string>
#include <vector>

namespace testsupport {

/// The documented conformance table for the category-response parser: messy
/// model outputs (numbering, casing, punctuation, quoting) with their
/// expected results. `expected` empty means the case must raise the named
/// error class.
struct ParserCase {
    std::string response;
    std::vector<std::string> expected;  // taxonomy spellings, or empty on error
    std::string expected_error;         // "UnparseableResponse" / "UnknownCategory"
};

inline const std::vector<ParserCase>& parser_conformance_cases() {
    static const std::vector<ParserCase> cases = {
        // clean and near-clean accept cases
        {"Food, Drinks, Electronics", {"Food", "Drinks", "Electronics"}, ""},
        {"food, drinks, electronics", {"Food", "Drinks", "Electronics"}, ""},
        {"Foods, Drink, Electronics", {"Food", "Drinks", "Electronics"}, ""},
        {"  Food ,  Drinks ,  Electronics  ", {"Food", "Drinks", "Electronics"}, ""},
        {"Food, Drinks, Electronics.", {"Food", "Drinks", "Electronics"}, ""},
        {"1. Food\n2. Drinks\n3. Electronics", {"Food", "Drinks", "Electronics"}, ""},
        {"1) food\n2) drinks\n3) electronics", {"Food", "Drinks", "Electronics"}, ""},
        {"- Food\n- Drinks\n- Electronics", {"Food", "Drinks", "Electronics"}, ""},
        {"\"Food\", \"Drinks\", \"Electronics\"", {"Food", "Drinks", "Electronics"}, ""},
        {"Food,Drinks,Electronics", {"Food", "Drinks", "Electronics"}, ""},
        {"* Food\n* Drinks\n* Electronics", {"Food", "Drinks", "Electronics"}, ""},
        {"FOOD, DRINKS, ELECTRONICS", {"Food", "Drinks", "Electronics"}, ""},
        {"Food, drinks, ELECTRONICS,", {"Food", "Drinks", "Electronics"}, ""},
        {"electronics, fmcg, cosmetics", {"Electronics", "FMCG", "Cosmetics"}, ""},
        // reject cases: wrong arity
        {"Food and Drinks", {}, "UnparseableResponse"},
        {"Food, Drinks", {}, "UnparseableResponse"},
        {"Food, Drinks, Electronics, FMCG", {}, "UnparseableResponse"},
        {"", {}, "UnparseableResponse"},
        // reject cases: unmatched item
        {"Food, Drinks, Spaceships", {}, "UnknownCategory"},
        {"Drinks and Food, Electronics, FMCG", {}, "UnknownCategory"},
    };
    return cases;
}

}  // namespace testsupport
