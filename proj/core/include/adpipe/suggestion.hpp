#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adpipe/backends.hpp"
#include "adpipe/prompts.hpp"
#include "adpipe/types.hpp"

namespace adpipe {

/// Output of a suggestion protocol run. ranked_categories always has exactly
/// three entries; the single-stage baseline backfills ranks it cannot know
/// with the empty-string sentinel. raw_responses records every VLM exchange
/// in order, for audit and for call-count assertions.
struct SuggestionResult {
    std::vector<std::string> ranked_categories;
    std::string chosen_category;
    std::string object_phrase;
    std::vector<std::pair<std::string, std::string>> raw_responses;
};

struct BrandedObjectFinding {
    std::string object_name;
    std::string location_phrase;
    std::string brand;
};

/// The fixed list of findable branded objects, in prompt order.
const std::vector<std::string>& findable_objects();

struct SuggestOptions {
    /// When set, the region of interest is rendered into the image as a blue
    /// box before prompting (evaluation against annotated boxes); when not,
    /// the prompt is issued on the bare scene (insertion, box predicted
    /// later).
    std::optional<PlacementBox> roi_box;
    /// Which rank of the stage-1 result to condition stage 2 on (0 = top).
    int chosen_rank = 0;
};

/// Response cleanup shared by the parsers: trims whitespace, strips wrapping
/// quotes, leading list markers (numbering, bullets) and trailing
/// punctuation.
std::string clean_response_line(const std::string& raw);

/// Parses a stage-1 response into exactly three taxonomy-spelled category
/// names, order preserved. Accepts comma-separated single lines and
/// numbered/bulleted multi-line lists. Throws UnparseableResponse on wrong
/// arity, UnknownCategory when an item cannot be matched to the taxonomy.
std::vector<std::string> parse_category_response(const std::string& response,
                                                 const CategoryTaxonomy& taxonomy);

/// Parses a combined "Category: object" single-stage response.
std::pair<std::string, std::string> parse_single_stage_response(const std::string& response,
                                                                const CategoryTaxonomy& taxonomy);

/// Cleans an object-suggestion response into a single-line phrase of at most
/// 80 characters. Throws EmptyResponse / MultiLineResponse / UnparseableResponse.
std::string clean_object_phrase(const std::string& response);

/// Parses an integer 0..10 rating (digits only) and normalizes to [0,1].
double parse_rating(const std::string& response);

/// Stage 2 of the protocol: asks for a concrete object of `category`.
std::string suggest_object(const SceneImage& image, const std::string& category,
                           VlmBackend& vlm, const PromptLibrary& prompts,
                           const CategoryTaxonomy& taxonomy);

/// Two VLM calls: category selection, then object suggestion conditioned on
/// the chosen category. Errors are re-thrown annotated with the stage index
/// (1 or 2); a stage-1 failure never issues the stage-2 call.
SuggestionResult two_stage_suggest(const SceneImage& image, const CategoryTaxonomy& taxonomy,
                                   VlmBackend& vlm, const PromptLibrary& prompts,
                                   const SuggestOptions& options = {});

/// Single combined query, the baseline the two-stage protocol is compared
/// against.
SuggestionResult single_stage_suggest(const SceneImage& image, const CategoryTaxonomy& taxonomy,
                                      VlmBackend& vlm, const PromptLibrary& prompts,
                                      const SuggestOptions& options = {});

/// Identifies the most visible branded object. Parse rule: longest listed
/// object name found in the cleaned response; the trailing run of
/// capitalized tokens is the brand; everything between is the location.
BrandedObjectFinding find_branded_object(const SceneImage& image, VlmBackend& vlm,
                                         const PromptLibrary& prompts);

enum class PromptingStrategy { single_stage, two_stage };

std::string to_string(PromptingStrategy s);
PromptingStrategy prompting_strategy_from_string(const std::string& s);

/// Collects `samples_per_image` object phrases per image for the diversity
/// metrics. Sampling protocol: two-stage sample k conditions on the stage-1
/// rank (k mod 3), exercising the ranked list; single-stage reissues the
/// same combined query each time.
std::map<std::string, std::vector<std::string>> sample_suggestions(
    const std::vector<std::pair<std::string, SceneImage>>& images,
    const CategoryTaxonomy& taxonomy, VlmBackend& vlm, const PromptLibrary& prompts,
    PromptingStrategy strategy, int samples_per_image, const SuggestOptions& base_options = {});

}  // namespace adpipe
