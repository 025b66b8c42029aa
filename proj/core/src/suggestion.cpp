#include "adpipe/suggestion.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "adpipe/image_io.hpp"

namespace adpipe {

namespace {

const std::vector<std::string> kFindableObjects = {
    "chips packet", "soda can", "shampoo bottle", "perfume can",
    "vacuum cleaner", "tshirt", "shoes", "coffee cup",
};

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_trailing_punct(char c) {
    return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?';
}

std::string strip_wrapping_quotes(std::string s) {
    while (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                             (s.front() == '\'' && s.back() == '\''))) {
        s = trim(s.substr(1, s.size() - 2));
    }
    return s;
}

std::string strip_list_marker(std::string s) {
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) {
        return trim(s.substr(i + 1));
    }
    if (!s.empty() && (s[0] == '-' || s[0] == '*')) {
        return trim(s.substr(1));
    }
    return s;
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::string part =
            comma == std::string::npos ? s.substr(start) : s.substr(start, comma - start);
        parts.push_back(part);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return parts;
}

std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> tokens;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

std::string join(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (i > begin) out += ' ';
        out += tokens[i];
    }
    return out;
}

void rethrow_with_stage(int stage) {
    try {
        throw;
    } catch (Error& e) {
        e.set_stage(stage);
        throw;
    }
}

SceneImage apply_roi(const SceneImage& image, const SuggestOptions& options) {
    if (options.roi_box) {
        return draw_roi_box(image, *options.roi_box);
    }
    return image;
}

}  // namespace

const std::vector<std::string>& findable_objects() { return kFindableObjects; }

std::string clean_response_line(const std::string& raw) {
    std::string s = strip_list_marker(strip_wrapping_quotes(trim(raw)));
    while (!s.empty() && is_trailing_punct(s.back())) {
        s.pop_back();
    }
    return trim(s);
}

std::vector<std::string> parse_category_response(const std::string& response,
                                                 const CategoryTaxonomy& taxonomy) {
    std::vector<std::string> lines = split_lines(response);
    std::vector<std::string> items;
    if (lines.size() == 1) {
        for (const auto& part : split_commas(lines[0])) {
            const std::string cleaned = clean_response_line(part);
            if (!cleaned.empty()) items.push_back(cleaned);
        }
    } else {
        for (const auto& line : lines) {
            const std::string cleaned = clean_response_line(line);
            if (!cleaned.empty()) items.push_back(cleaned);
        }
    }
    if (items.size() != 3) {
        throw UnparseableResponse("expected 3 comma-separated categories, got " +
                                  std::to_string(items.size()) + " in: " + response);
    }
    std::vector<std::string> categories;
    for (const auto& item : items) {
        auto matched = taxonomy.match(item);
        if (!matched) {
            throw UnknownCategory(item);
        }
        categories.push_back(*matched);
    }
    return categories;
}

std::string clean_object_phrase(const std::string& response) {
    const std::string trimmed = trim(response);
    if (trimmed.empty()) {
        throw EmptyResponse("object suggestion response is empty");
    }
    if (split_lines(trimmed).size() > 1) {
        throw MultiLineResponse("object suggestion response spans multiple lines: " + response);
    }
    std::string phrase = strip_wrapping_quotes(trimmed);
    while (!phrase.empty() && is_trailing_punct(phrase.back())) {
        phrase.pop_back();
    }
    phrase = trim(phrase);
    if (phrase.empty()) {
        throw EmptyResponse("object suggestion response is empty after cleanup");
    }
    if (phrase.size() > 80) {
        throw UnparseableResponse("object phrase exceeds 80 characters: " + phrase);
    }
    return phrase;
}

double parse_rating(const std::string& response) {
    std::string s = trim(response);
    while (!s.empty() && is_trailing_punct(s.back())) {
        s.pop_back();
    }
    if (s.empty() || s.size() > 2 ||
        !std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; })) {
        throw UnparseableRating("expected an integer 0..10, got: " + response);
    }
    const int value = std::stoi(s);
    if (value > 10) {
        throw UnparseableRating("rating out of range 0..10: " + response);
    }
    return value / 10.0;
}

std::pair<std::string, std::string> parse_single_stage_response(const std::string& response,
                                                                const CategoryTaxonomy& taxonomy) {
    const std::vector<std::string> lines = split_lines(response);
    if (lines.size() != 1) {
        throw UnparseableResponse("expected one 'Category: object' line, got: " + response);
    }
    const std::size_t colon = lines[0].find(':');
    if (colon == std::string::npos) {
        throw UnparseableResponse("expected 'Category: object' format in: " + response);
    }
    const std::string raw_category = clean_response_line(lines[0].substr(0, colon));
    auto matched = taxonomy.match(raw_category);
    if (!matched) {
        throw UnknownCategory(raw_category);
    }
    const std::string phrase = clean_object_phrase(lines[0].substr(colon + 1));
    return {*matched, phrase};
}

std::string suggest_object(const SceneImage& image, const std::string& category,
                           VlmBackend& vlm, const PromptLibrary& prompts,
                           const CategoryTaxonomy& taxonomy) {
    if (!taxonomy.contains(category)) {
        throw UnknownCategory(category);
    }
    const std::string prompt = prompts.object_suggestion(category);
    return clean_object_phrase(vlm.answer(image, prompt));
}

SuggestionResult two_stage_suggest(const SceneImage& image, const CategoryTaxonomy& taxonomy,
                                   VlmBackend& vlm, const PromptLibrary& prompts,
                                   const SuggestOptions& options) {
    SuggestionResult result;
    const SceneImage prompt_image = apply_roi(image, options);

    // Stage 1: category selection.
    std::string ranked_response;
    try {
        const std::string prompt = build_category_prompt(prompts, taxonomy);
        ranked_response = vlm.answer(prompt_image, prompt);
        result.raw_responses.emplace_back(prompt, ranked_response);
        result.ranked_categories = parse_category_response(ranked_response, taxonomy);
    } catch (...) {
        rethrow_with_stage(1);
    }
    const int n = static_cast<int>(result.ranked_categories.size());
    const int rank = ((options.chosen_rank % n) + n) % n;
    result.chosen_category = result.ranked_categories[static_cast<std::size_t>(rank)];

    // Stage 2: object suggestion conditioned on the chosen category.
    try {
        const std::string prompt = prompts.object_suggestion(result.chosen_category);
        const std::string response = vlm.answer(prompt_image, prompt);
        result.raw_responses.emplace_back(prompt, response);
        result.object_phrase = clean_object_phrase(response);
    } catch (...) {
        rethrow_with_stage(2);
    }
    return result;
}

SuggestionResult single_stage_suggest(const SceneImage& image, const CategoryTaxonomy& taxonomy,
                                      VlmBackend& vlm, const PromptLibrary& prompts,
                                      const SuggestOptions& options) {
    if (taxonomy.empty()) {
        throw EmptyTaxonomy("cannot build a suggestion prompt from an empty taxonomy");
    }
    SuggestionResult result;
    const SceneImage prompt_image = apply_roi(image, options);
    try {
        const std::string prompt = prompts.single_stage_suggestion(taxonomy);
        const std::string response = vlm.answer(prompt_image, prompt);
        result.raw_responses.emplace_back(prompt, response);
        auto [category, phrase] = parse_single_stage_response(response, taxonomy);
        result.chosen_category = category;
        result.object_phrase = phrase;
        result.ranked_categories = {category, "", ""};
    } catch (...) {
        rethrow_with_stage(1);
    }
    return result;
}

BrandedObjectFinding find_branded_object(const SceneImage& image, VlmBackend& vlm,
                                         const PromptLibrary& prompts) {
    const std::string response = vlm.answer(image, prompts.branded_object());

    // Strip punctuation entirely; the prompt forbids it but models slip.
    std::string cleaned;
    cleaned.reserve(response.size());
    for (char c : response) {
        if (std::ispunct(static_cast<unsigned char>(c))) {
            cleaned += ' ';
        } else {
            cleaned += c;
        }
    }
    const std::vector<std::string> tokens = tokenize(cleaned);
    const std::string text = join(tokens, 0, tokens.size());
    const std::string lowered = to_lower(text);

    // Longest listed object name present wins.
    std::string best_object;
    std::size_t best_pos = std::string::npos;
    for (const auto& name : kFindableObjects) {
        const std::string padded = " " + lowered + " ";
        const std::size_t pos = padded.find(" " + name + " ");
        if (pos != std::string::npos && name.size() > best_object.size()) {
            best_object = name;
            best_pos = pos;  // position in padded text
        }
    }
    if (best_object.empty()) {
        throw NoListedObject("no listed object named in: " + response);
    }

    // Token index just past the object name.
    const std::size_t object_begin_chars = best_pos;  // chars before the object in `text`
    std::size_t consumed = 0;
    std::size_t object_first_token = 0;
    while (consumed < object_begin_chars && object_first_token < tokens.size()) {
        consumed += tokens[object_first_token].size() + 1;
        ++object_first_token;
    }
    const std::size_t object_token_count = tokenize(best_object).size();
    const std::size_t after_object = object_first_token + object_token_count;

    // Brand = trailing run of capitalized tokens after the object name.
    std::size_t brand_begin = tokens.size();
    while (brand_begin > after_object &&
           std::isupper(static_cast<unsigned char>(tokens[brand_begin - 1][0]))) {
        --brand_begin;
    }
    if (brand_begin == tokens.size()) {
        throw UnparseableResponse("no trailing capitalized brand token in: " + response);
    }

    BrandedObjectFinding finding;
    finding.object_name = best_object;
    finding.location_phrase = join(tokens, after_object, brand_begin);
    finding.brand = join(tokens, brand_begin, tokens.size());
    return finding;
}

std::string to_string(PromptingStrategy s) {
    return s == PromptingStrategy::single_stage ? "single-stage" : "two-stage";
}

PromptingStrategy prompting_strategy_from_string(const std::string& s) {
    if (s == "single-stage" || s == "single") return PromptingStrategy::single_stage;
    if (s == "two-stage" || s == "two") return PromptingStrategy::two_stage;
    throw ConfigError("unknown prompting strategy: " + s);
}

std::map<std::string, std::vector<std::string>> sample_suggestions(
    const std::vector<std::pair<std::string, SceneImage>>& images,
    const CategoryTaxonomy& taxonomy, VlmBackend& vlm, const PromptLibrary& prompts,
    PromptingStrategy strategy, int samples_per_image, const SuggestOptions& base_options) {
    if (samples_per_image < 1) {
        throw InvalidArgument("samples_per_image must be >= 1");
    }
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& [id, image] : images) {
        std::vector<std::string> phrases;
        for (int k = 0; k < samples_per_image; ++k) {
            SuggestOptions options = base_options;
            SuggestionResult result;
            if (strategy == PromptingStrategy::two_stage) {
                options.chosen_rank = k;
                result = two_stage_suggest(image, taxonomy, vlm, prompts, options);
            } else {
                result = single_stage_suggest(image, taxonomy, vlm, prompts, options);
            }
            phrases.push_back(result.object_phrase);
        }
        out[id] = std::move(phrases);
    }
    return out;
}

}  // namespace adpipe
