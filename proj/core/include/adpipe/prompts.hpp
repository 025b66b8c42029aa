#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "adpipe/types.hpp"

namespace adpipe {

/// The prompt templates, loaded from versioned text files at startup. Each
/// template is a single file; interpolation placeholders are {CATEGORY_LIST},
/// {category} and {object_name}. Per-template checksums are logged into run
/// provenance so a result can always be tied to the exact prompt wording.
class PromptLibrary {
public:
    /// Loads all known templates from a directory. Throws TemplateError when
    /// the directory or any template file is missing.
    static PromptLibrary load_dir(const std::filesystem::path& dir);

    /// Builds a library from in-memory template texts (tests).
    static PromptLibrary from_strings(std::map<std::string, std::string> templates);

    std::string category_selection(const CategoryTaxonomy& taxonomy) const;
    std::string object_suggestion(const std::string& category) const;
    std::string single_stage_suggestion(const CategoryTaxonomy& taxonomy) const;
    std::string branded_object() const;
    std::string generation(const std::string& object_name) const;
    std::string generation_negative() const;
    std::string plausibility_rating(const std::string& category) const;
    std::string realism_rating() const;

    /// template name -> fnv1a64 hex of the template text.
    std::map<std::string, std::string> checksums() const;

    static const std::vector<std::string>& template_names();

private:
    std::string raw(const std::string& name) const;

    std::map<std::string, std::string> templates_;
};

/// Stage-1 prompt of the two-stage protocol. Appends a warning to `warnings`
/// (when given) if the taxonomy holds fewer than the three categories the
/// template asks for. Throws EmptyTaxonomy on an empty taxonomy.
std::string build_category_prompt(const PromptLibrary& prompts, const CategoryTaxonomy& taxonomy,
                                  std::vector<std::string>* warnings = nullptr);

}  // namespace adpipe
