#include "core/lexicon.hpp"

#include <fstream>
#include <unordered_set>

#include "json.hpp"

#include "core/error.hpp"
#include "core/text.hpp"

namespace atant {

void predicate_lexicon::add(std::string surface, rule r) {
    size_t tokens = text::tokenize(surface).size();
    max_surface_tokens_ = std::max(max_surface_tokens_, tokens);
    auto& rules = entries_[std::move(surface)];
    // Conditioned rules take precedence over unconditioned ones.
    if (!r.when_object_tag.empty())
        rules.insert(rules.begin(), std::move(r));
    else
        rules.push_back(std::move(r));
}

void predicate_lexicon::load_extension(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) fail(errc::io, "cannot read lexicon file " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        fail(errc::parse, "lexicon file " + file.string() + ": " + e.what());
    }
    if (!doc.is_object()) fail(errc::parse, "lexicon file " + file.string() + ": expected object");
    if (!doc.contains("predicates")) return;
    for (const auto& [surface, value] : doc.at("predicates").items()) {
        rule r;
        if (value.is_string()) {
            r.canonical = value.get<std::string>();
        } else if (value.is_object()) {
            r.canonical = value.at("canonical").get<std::string>();
            r.when_object_tag = value.value("when_object_tag", "");
            r.update_verb = value.value("update_verb", false);
        } else {
            fail(errc::parse, "lexicon file " + file.string() + ": predicates." + surface +
                                  ": expected string or object");
        }
        add(text::fold(surface), std::move(r));
    }
}

std::string predicate_lexicon::lookup(std::string_view surface_normalized,
                                      const std::vector<std::string>& object_tags) const {
    auto it = entries_.find(surface_normalized);
    if (it != entries_.end()) {
        for (const auto& r : it->second) {
            if (r.when_object_tag.empty()) return r.canonical;
            for (const auto& t : object_tags)
                if (t == r.when_object_tag) return r.canonical;
        }
        // All rules conditioned and none matched: fall through to the
        // last (least specific) rule rather than inventing a slot.
        if (!it->second.empty()) return it->second.back().canonical;
    }
    std::string canon = text::normalize_slot(surface_normalized);
    for (auto& c : canon)
        if (c == ' ') c = '_';
    return canon;
}

bool predicate_lexicon::has_surface(std::string_view surface_normalized) const {
    return entries_.find(surface_normalized) != entries_.end();
}

bool predicate_lexicon::is_update_surface(std::string_view surface_normalized) const {
    auto it = entries_.find(surface_normalized);
    if (it == entries_.end()) return false;
    for (const auto& r : it->second)
        if (r.update_verb) return true;
    return false;
}

size_t predicate_lexicon::size() const {
    size_t n = 0;
    for (const auto& [_, rules] : entries_) n += rules.size();
    return n;
}

void valence_lexicon::add(std::string word, int weight) {
    weights_[std::move(word)] = weight;
}

void valence_lexicon::load_extension(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) fail(errc::io, "cannot read lexicon file " + file.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        fail(errc::parse, "lexicon file " + file.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("valence")) return;
    for (const auto& [word, value] : doc.at("valence").items()) {
        if (!value.is_number_integer())
            fail(errc::parse, "lexicon file " + file.string() + ": valence." + word +
                                  ": expected integer weight");
        add(text::fold(word), value.get<int>());
    }
}

int valence_lexicon::weight(std::string_view token) const {
    auto it = weights_.find(token);
    return it == weights_.end() ? 0 : it->second;
}

bool valence_lexicon::has(std::string_view token) const {
    return weights_.find(token) != weights_.end();
}

valence_lexicon::score_result valence_lexicon::score(const std::vector<std::string>& tokens) const {
    score_result r;
    for (const auto& t : tokens) {
        auto it = weights_.find(t);
        if (it == weights_.end()) continue;
        r.sum += it->second;
        ++r.hits;
    }
    return r;
}

namespace tag {
bool known(std::string_view t) {
    return t == person || t == place || t == event || t == datetime || t == object ||
           t == emotion || t == activity || t == organization;
}
}  // namespace tag

}  // namespace atant
