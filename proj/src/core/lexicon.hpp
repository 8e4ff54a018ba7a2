#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace atant {

/// Maps surface verb/noun phrases to canonical predicate labels. A rule
/// may be conditioned on an object type tag so one surface ("moved to")
/// can land on different slots for places vs dates. Lookup is total:
/// unknown surfaces canonicalize by normalization (spaces to
/// underscores).
class predicate_lexicon {
  public:
    struct rule {
        std::string canonical;
        std::string when_object_tag;  // empty = unconditional
        bool update_verb = false;     // surfaces that signal same-slot replacement
    };

    static predicate_lexicon base();

    void add(std::string surface, rule r);

    /// Extension file: JSON {"predicates": {surface: canonical | {"canonical":
    /// ..., "when_object_tag": ..., "update_verb": ...}}, "valence": {...}}.
    /// The valence section is read by valence_lexicon::load_extension.
    void load_extension(const std::filesystem::path& file);

    [[nodiscard]] std::string lookup(std::string_view surface_normalized,
                                     const std::vector<std::string>& object_tags) const;
    [[nodiscard]] bool has_surface(std::string_view surface_normalized) const;
    [[nodiscard]] bool is_update_surface(std::string_view surface_normalized) const;
    [[nodiscard]] size_t max_surface_tokens() const { return max_surface_tokens_; }
    [[nodiscard]] size_t size() const;

  private:
    std::map<std::string, std::vector<rule>, std::less<>> entries_;
    size_t max_surface_tokens_ = 1;
};

/// Verb-phrase renderings per canonical predicate, used by answer
/// assembly and query prediction.
struct predicate_render {
    std::string third;    // "lives in"
    std::string speaker;  // "live in"
    std::string q_verb;   // "live"
};

predicate_render render_info(const std::string& canonical);

/// Static affect word list with unit weights; extension files may add
/// or override entries.
class valence_lexicon {
  public:
    static valence_lexicon base();

    void load_extension(const std::filesystem::path& file);
    void add(std::string word, int weight);

    [[nodiscard]] int weight(std::string_view token) const;
    [[nodiscard]] bool has(std::string_view token) const;
    [[nodiscard]] size_t size() const { return weights_.size(); }

    struct score_result {
        int sum = 0;
        int hits = 0;
    };
    [[nodiscard]] score_result score(const std::vector<std::string>& tokens) const;

  private:
    std::map<std::string, int, std::less<>> weights_;
};

/// Closed word lists backing type tagging and pronoun compatibility.
namespace gazetteer {

bool place(std::string_view token);
bool person_term(std::string_view token);
bool female_person(std::string_view token);
bool male_person(std::string_view token);
bool first_name(std::string_view token);
bool event_term(std::string_view token);
bool activity_term(std::string_view token);
bool organization_term(std::string_view token);

}  // namespace gazetteer

namespace tag {
inline constexpr std::string_view person = "person";
inline constexpr std::string_view place = "place";
inline constexpr std::string_view event = "event";
inline constexpr std::string_view datetime = "datetime";
inline constexpr std::string_view object = "object";
inline constexpr std::string_view emotion = "emotion";
inline constexpr std::string_view activity = "activity";
inline constexpr std::string_view organization = "organization";
bool known(std::string_view t);
}  // namespace tag

}  // namespace atant
