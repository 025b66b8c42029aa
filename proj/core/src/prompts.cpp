#include "adpipe/prompts.hpp"

#include <fstream>
#include <sstream>

#include "adpipe/hash.hpp"

namespace adpipe {

namespace {

const std::vector<std::string> kTemplateNames = {
    "category_selection", "object_suggestion", "single_stage_suggestion", "branded_object",
    "generation",         "generation_negative", "plausibility_rating",   "realism_rating",
};

std::string replace_all(std::string text, const std::string& placeholder,
                        const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return text;
}

// Template files end with the editor's trailing newline; prompts do not.
std::string strip_trailing_newlines(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) {
        s.pop_back();
    }
    return s;
}

}  // namespace

const std::vector<std::string>& PromptLibrary::template_names() { return kTemplateNames; }

PromptLibrary PromptLibrary::load_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw TemplateError("prompt template directory not found: " + dir.string());
    }
    std::map<std::string, std::string> templates;
    for (const auto& name : kTemplateNames) {
        const auto path = dir / (name + ".txt");
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw TemplateError("missing prompt template: " + path.string());
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        templates[name] = strip_trailing_newlines(buf.str());
    }
    return from_strings(std::move(templates));
}

PromptLibrary PromptLibrary::from_strings(std::map<std::string, std::string> templates) {
    for (const auto& name : kTemplateNames) {
        if (!templates.count(name)) {
            throw TemplateError("missing prompt template: " + name);
        }
    }
    PromptLibrary lib;
    lib.templates_ = std::move(templates);
    return lib;
}

std::string PromptLibrary::raw(const std::string& name) const { return templates_.at(name); }

std::string PromptLibrary::category_selection(const CategoryTaxonomy& taxonomy) const {
    return replace_all(raw("category_selection"), "{CATEGORY_LIST}", taxonomy.joined());
}

std::string PromptLibrary::object_suggestion(const std::string& category) const {
    return replace_all(raw("object_suggestion"), "{category}", category);
}

std::string PromptLibrary::single_stage_suggestion(const CategoryTaxonomy& taxonomy) const {
    return replace_all(raw("single_stage_suggestion"), "{CATEGORY_LIST}", taxonomy.joined());
}

std::string PromptLibrary::branded_object() const { return raw("branded_object"); }

std::string PromptLibrary::generation(const std::string& object_name) const {
    return replace_all(raw("generation"), "{object_name}", object_name);
}

std::string PromptLibrary::generation_negative() const { return raw("generation_negative"); }

std::string PromptLibrary::plausibility_rating(const std::string& category) const {
    return replace_all(raw("plausibility_rating"), "{category}", category);
}

std::string PromptLibrary::realism_rating() const { return raw("realism_rating"); }

std::map<std::string, std::string> PromptLibrary::checksums() const {
    std::map<std::string, std::string> out;
    for (const auto& [name, text] : templates_) {
        out[name] = to_hex(fnv1a64(text));
    }
    return out;
}

std::string build_category_prompt(const PromptLibrary& prompts, const CategoryTaxonomy& taxonomy,
                                  std::vector<std::string>* warnings) {
    if (taxonomy.empty()) {
        throw EmptyTaxonomy("cannot build a category prompt from an empty taxonomy");
    }
    if (warnings != nullptr && taxonomy.size() < 3) {
        warnings->push_back("taxonomy has " + std::to_string(taxonomy.size()) +
                            " categories but the prompt requests three");
    }
    return prompts.category_selection(taxonomy);
}

}  // namespace adpipe
