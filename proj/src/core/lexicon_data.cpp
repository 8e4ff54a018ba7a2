#include <unordered_map>
#include <unordered_set>

#include "core/lexicon.hpp"

namespace atant {

namespace {

struct surface_entry {
    const char* surface;
    const char* canonical;
    const char* when_tag;  // may be ""
    bool update;
};

// Base predicate surface forms. Inflection families are listed out so
// matching stays a flat longest-phrase scan.
constexpr surface_entry kPredicates[] = {
    // residence / location
    {"live in", "lives_in", "", false},
    {"lives in", "lives_in", "", false},
    {"lived in", "lives_in", "", false},
    {"living in", "lives_in", "", false},
    {"live at", "lives_in", "", false},
    {"lives at", "lives_in", "", false},
    {"moved to", "lives_in", "place", true},
    {"moved to", "scheduled_for", "datetime", true},
    {"moved to", "located_in", "", true},
    {"moving to", "lives_in", "place", true},
    {"relocated to", "lives_in", "place", true},
    {"moved in with", "moved_in_with", "", false},
    {"staying with", "staying_with", "", false},
    {"staying at", "staying_at", "", false},
    // work
    {"work at", "works_at", "", false},
    {"works at", "works_at", "", false},
    {"worked at", "works_at", "", false},
    {"working at", "works_at", "", false},
    {"work for", "works_at", "", false},
    {"works for", "works_at", "", false},
    {"hired at", "works_at", "", false},
    {"hired by", "works_at", "", false},
    {"job at", "works_at", "", false},
    {"offer from", "got_offer_from", "", false},
    {"interviewing at", "interviewing_at", "", false},
    {"interviewed at", "interviewing_at", "", false},
    {"promoted to", "promoted_to", "", true},
    {"demoted to", "promoted_to", "", true},
    {"reports to", "reports_to", "", false},
    {"manages", "manages", "", false},
    {"leads", "leads", "", false},
    {"quit", "quit", "", false},
    {"resigned from", "quit", "", false},
    {"laid off from", "laid_off_from", "", false},
    {"retired from", "retired_from", "", false},
    // scheduling
    {"scheduled for", "scheduled_for", "", false},
    {"scheduled on", "scheduled_for", "", false},
    {"booked for", "scheduled_for", "", false},
    {"booked on", "scheduled_for", "", false},
    {"set for", "scheduled_for", "", false},
    {"planned for", "scheduled_for", "", false},
    {"rescheduled to", "scheduled_for", "", true},
    {"rescheduled for", "scheduled_for", "", true},
    {"rescheduled", "scheduled_for", "", true},
    {"pushed to", "scheduled_for", "", true},
    {"pushed back to", "scheduled_for", "", true},
    {"postponed to", "scheduled_for", "", true},
    {"postponed until", "scheduled_for", "", true},
    {"bumped to", "scheduled_for", "", true},
    {"changed to", "scheduled_for", "datetime", true},
    {"changed to", "changed_to", "", true},
    {"switched to", "changed_to", "", true},
    // learning
    {"enrolled in", "enrolled_in", "", false},
    {"enrolling in", "enrolled_in", "", false},
    {"signed up for", "attends", "", false},
    {"signed up to", "attends", "", false},
    {"registered for", "attends", "", false},
    {"attends", "attends", "", false},
    {"attend", "attends", "", false},
    {"attending", "attends", "", false},
    {"going to", "traveling_to", "place", false},
    {"going to", "attends", "", false},
    {"go to", "attends", "", false},
    {"goes to", "attends", "", false},
    {"studying", "studying", "", false},
    {"studies", "studying", "", false},
    {"learning", "learning", "", false},
    {"learned", "learning", "", false},
    {"practicing", "practices", "", false},
    {"practices", "practices", "", false},
    {"takes", "attends", "activity", false},
    {"taking", "attends", "activity", false},
    {"teaches", "teaches", "", false},
    {"teaching", "teaches", "", false},
    {"tutors", "teaches", "", false},
    {"passed", "passed", "", false},
    {"failed", "failed", "", false},
    {"graduated from", "graduated_from", "", false},
    {"completed", "completed", "", false},
    {"finished", "finished", "", false},
    // health
    {"diagnosed with", "diagnosed_with", "", false},
    {"recovering from", "recovering_from", "", false},
    {"recovered from", "recovering_from", "", false},
    {"sprained", "sprained", "", false},
    {"broke", "broke", "", false},
    {"fractured", "broke", "", false},
    {"injured", "injured", "", false},
    {"hurt", "injured", "", false},
    {"allergic to", "allergic_to", "", false},
    {"prescribed", "prescribed", "", false},
    {"taking medication for", "prescribed", "", false},
    {"trains for", "training_for", "", false},
    {"training for", "training_for", "", false},
    // acquisitions and events
    {"got", "got", "", false},
    {"gets", "got", "", false},
    {"received", "got", "", false},
    {"landed", "got", "", false},
    {"won", "won", "", false},
    {"lost", "lost", "", false},
    {"earned", "got", "", false},
    {"bought", "bought", "", false},
    {"purchased", "bought", "", false},
    {"sold", "sold", "", false},
    {"adopted", "adopted", "", false},
    {"rescued", "adopted", "", false},
    {"named", "named", "", false},
    {"called", "named", "", false},
    {"started", "started", "", false},
    {"start", "started", "", false},
    {"starting", "started", "", false},
    {"joined", "works_at", "organization", false},
    {"joined", "joined", "", false},
    {"launched", "launched", "", false},
    {"opened", "opened", "", false},
    {"built", "built", "", false},
    {"made", "made", "", false},
    {"planted", "planted", "", false},
    {"baked", "baked", "", false},
    {"painted", "painted", "", false},
    {"knitted", "knitted", "", false},
    {"wrote", "wrote", "", false},
    {"visited", "visited", "", false},
    {"traveled to", "visited", "", false},
    {"flew to", "visited", "", false},
    {"met", "met", "", false},
    {"married", "married", "", false},
    {"engaged to", "engaged_to", "", false},
    {"proposed to", "proposed_to", "", false},
    {"expecting", "expecting", "", false},
    {"welcomed", "welcomed", "", false},
    {"hosted", "hosted", "", false},
    {"hosting", "hosted", "", false},
    {"organized", "organized", "", false},
    {"volunteers at", "volunteers_at", "", false},
    {"volunteer at", "volunteers_at", "", false},
    {"volunteering at", "volunteers_at", "", false},
    {"owns", "owns", "", false},
    {"own", "owns", "", false},
    {"runs", "runs", "", false},
    {"ran", "ran", "", false},
    {"plays", "plays", "", false},
    {"play", "plays", "", false},
    {"played", "plays", "", false},
    {"sings in", "sings_in", "", false},
    {"reads", "reads", "", false},
    {"reading", "reads", "", false},
    {"watches", "watches", "", false},
    {"cooks", "cooks", "", false},
    {"grows", "grows", "", false},
    {"growing", "grows", "", false},
    {"collects", "collects", "", false},
    {"keeps", "keeps", "", false},
    {"keeping", "keeps", "", false},
    {"renovating", "renovating", "", false},
    {"renovated", "renovating", "", false},
    {"repaired", "repaired", "", false},
    {"fixed", "repaired", "", false},
    {"cleaned", "cleaned", "", false},
    {"packed", "packed", "", false},
    {"unpacked", "unpacked", "", false},
    {"rented", "rented", "", false},
    {"leased", "rented", "", false},
    {"booked", "booked", "", false},
    {"reserved", "booked", "", false},
    {"cancelled", "cancelled", "", true},
    {"canceled", "cancelled", "", true},
    {"has", "has", "", false},
    {"have", "has", "", false},
    {"had", "has", "", false},
    {"needs", "needs", "", false},
    {"need", "needs", "", false},
    {"wants", "wants", "", false},
    {"want", "wants", "", false},
    {"plans to", "plans_to", "", false},
    {"planning to", "plans_to", "", false},
    {"decided to", "decided_to", "", false},
    {"agreed to", "agreed_to", "", false},
    {"promised to", "promised_to", "", false},
    {"helped", "helped", "", false},
    {"helping", "helped", "", false},
    {"cares for", "cares_for", "", false},
    {"caring for", "cares_for", "", false},
    {"looks after", "cares_for", "", false},
    {"babysits", "cares_for", "", false},
    {"walks", "walks", "", false},
    {"walked", "walks", "", false},
    {"feeds", "feeds", "", false},
    {"drives", "drives", "", false},
    {"drove", "drives", "", false},
    {"commutes by", "commutes_by", "", false},
    {"commutes to", "commutes_to", "", false},
    {"saves for", "saving_for", "", false},
    {"saving for", "saving_for", "", false},
    {"paid off", "paid_off", "", false},
    {"owes", "owes", "", false},
    {"borrowed", "borrowed", "", false},
    {"lent", "lent", "", false},
    {"donated", "donated", "", false},
    {"applied to", "applied_to", "", false},
    {"applied for", "applied_for", "", false},
    {"accepted", "accepted", "", false},
    {"declined", "declined", "", false},
    {"turned down", "declined", "", true},
    {"waiting for", "waiting_for", "", false},
    {"waiting on", "waiting_for", "", false},
    {"heard back from", "heard_back_from", "", false},
    {"emailed", "emailed", "", false},
    {"texted", "texted", "", false},
    {"invited", "invited", "", false},
    {"celebrated", "celebrated", "", false},
    {"celebrating", "celebrated", "", false},
    {"turned", "turned", "", false},
    {"turns", "turned", "", false},
};

struct render_entry {
    const char* canonical;
    const char* third;
    const char* speaker;
    const char* q_verb;
};

constexpr render_entry kRenders[] = {
    {"is", "is", "are", "is"},
    {"lives_in", "lives in", "live in", "live"},
    {"located_in", "is in", "are in", "is"},
    {"scheduled_for", "is scheduled for", "are scheduled for", "scheduled"},
    {"works_at", "works at", "work at", "work"},
    {"feels", "feels", "feel", "feel"},
    {"started", "started", "started", "start"},
    {"attends", "attends", "attend", "attend"},
    {"enrolled_in", "is enrolled in", "are enrolled in", "enrolled"},
    {"diagnosed_with", "was diagnosed with", "were diagnosed with", "diagnosed"},
    {"recovering_from", "is recovering from", "are recovering from", "recovering"},
    {"got", "got", "got", "get"},
    {"got_offer_from", "got an offer from", "got an offer from", "offer"},
    {"adopted", "adopted", "adopted", "adopt"},
    {"bought", "bought", "bought", "buy"},
    {"sold", "sold", "sold", "sell"},
    {"named", "named", "named", "name"},
    {"married", "married", "married", "marry"},
    {"engaged_to", "is engaged to", "are engaged to", "engaged"},
    {"expecting", "is expecting", "are expecting", "expecting"},
    {"sprained", "sprained", "sprained", "sprain"},
    {"broke", "broke", "broke", "break"},
    {"injured", "injured", "injured", "injure"},
    {"allergic_to", "is allergic to", "are allergic to", "allergic"},
    {"passed", "passed", "passed", "pass"},
    {"failed", "failed", "failed", "fail"},
    {"completed", "completed", "completed", "complete"},
    {"finished", "finished", "finished", "finish"},
    {"graduated_from", "graduated from", "graduated from", "graduate"},
    {"won", "won", "won", "win"},
    {"lost", "lost", "lost", "lose"},
    {"met", "met", "met", "meet"},
    {"visited", "visited", "visited", "visit"},
    {"planted", "planted", "planted", "plant"},
    {"baked", "baked", "baked", "bake"},
    {"painted", "painted", "painted", "paint"},
    {"wrote", "wrote", "wrote", "write"},
    {"joined", "joined", "joined", "join"},
    {"quit", "quit", "quit", "quit"},
    {"teaches", "teaches", "teach", "teach"},
    {"studying", "is studying", "are studying", "studying"},
    {"learning", "is learning", "are learning", "learning"},
    {"practices", "practices", "practice", "practice"},
    {"training_for", "is training for", "are training for", "training"},
    {"volunteers_at", "volunteers at", "volunteer at", "volunteer"},
    {"owns", "owns", "own", "own"},
    {"runs", "runs", "run", "run"},
    {"ran", "ran", "ran", "run"},
    {"plays", "plays", "play", "play"},
    {"has", "has", "have", "have"},
    {"needs", "needs", "need", "need"},
    {"wants", "wants", "want", "want"},
    {"promoted_to", "was promoted to", "were promoted to", "promoted"},
    {"reports_to", "reports to", "report to", "report"},
    {"moved_in_with", "moved in with", "moved in with", "move"},
    {"staying_with", "is staying with", "are staying with", "staying"},
    {"prescribed", "was prescribed", "were prescribed", "prescribed"},
    {"welcomed", "welcomed", "welcomed", "welcome"},
    {"celebrated", "celebrated", "celebrated", "celebrate"},
    {"turned", "turned", "turned", "turn"},
    {"booked", "booked", "booked", "book"},
    {"rented", "rented", "rented", "rent"},
    {"saving_for", "is saving for", "are saving for", "saving"},
    {"applied_to", "applied to", "applied to", "apply"},
    {"applied_for", "applied for", "applied for", "apply"},
    {"accepted", "accepted", "accepted", "accept"},
    {"declined", "declined", "declined", "decline"},
    {"waiting_for", "is waiting for", "are waiting for", "waiting"},
    {"heard_back_from", "heard back from", "heard back from", "hear"},
    {"grows", "grows", "grow", "grow"},
    {"keeps", "keeps", "keep", "keep"},
    {"collects", "collects", "collect", "collect"},
    {"cares_for", "cares for", "care for", "care"},
    {"plans_to", "plans to", "plan to", "plan"},
    {"decided_to", "decided to", "decided to", "decide"},
    {"helped", "helped", "helped", "help"},
    {"hosted", "hosted", "hosted", "host"},
    {"renovating", "is renovating", "are renovating", "renovating"},
    {"interviewing_at", "is interviewing at", "are interviewing at", "interviewing"},
    {"traveling_to", "is going to", "are going to", "going"},
    {"laid_off_from", "was laid off from", "were laid off from", "laid"},
};

const char* kPositive[] = {
    "happy",      "glad",       "thrilled",   "excited",    "delighted",  "proud",
    "relieved",   "grateful",   "hopeful",    "optimistic", "joyful",     "cheerful",
    "content",    "pleased",    "ecstatic",   "overjoyed",  "love",       "loved",
    "loving",     "wonderful",  "amazing",    "fantastic",  "great",      "awesome",
    "brilliant",  "calm",       "confident",  "eager",      "encouraged", "energized",
    "enthusiastic", "fulfilled", "inspired",  "lucky",      "motivated",  "peaceful",
    "refreshed",  "satisfied",  "thankful",   "upbeat",     "warm",       "comforted",
    "reassured",  "serene",     "blissful",   "elated",     "jazzed",     "stoked",
    "pumped",     "cozy",       "festive",    "triumphant", "radiant",    "beaming",
    "giddy",      "merry",      "jolly",      "tickled",    "heartened",  "uplifted",
    "bright",     "sunny",      "sweet",      "lovely",     "charmed",    "honored",
    "blessed",    "fortunate",  "victorious", "accomplished", "proudest", "happier",
    "happiest",   "smiling",    "laughed",    "laughing",
};

const char* kNegative[] = {
    "sad",         "anxious",     "worried",    "nervous",     "scared",      "afraid",
    "terrified",   "angry",       "furious",    "upset",       "frustrated",  "stressed",
    "overwhelmed", "exhausted",   "drained",    "disappointed", "discouraged", "depressed",
    "miserable",   "heartbroken", "devastated", "lonely",      "guilty",      "ashamed",
    "embarrassed", "jealous",     "resentful",  "bitter",      "awful",       "terrible",
    "horrible",    "dread",       "dreading",   "grief",       "grieving",    "mourning",
    "crying",      "cried",       "hurting",    "painful",     "uneasy",      "tense",
    "panicked",    "panic",       "fear",       "hate",        "hated",       "annoyed",
    "irritated",   "gloomy",      "hopeless",   "helpless",    "insecure",    "regret",
    "regretful",   "sorry",       "distraught", "shaken",      "rattled",     "troubled",
    "unsettled",   "restless",    "weary",      "homesick",    "heavy",       "numb",
    "defeated",    "crushed",     "stung",      "aching",      "tearful",     "blue",
    "down",        "low",         "worse",      "worst",       "saddest",     "angriest",
};

const std::unordered_set<std::string_view> kPlaces = {
    "portland",  "seattle",   "austin",   "denver",    "chicago",  "boston",
    "atlanta",   "dallas",    "phoenix",  "miami",     "nashville", "oakland",
    "tucson",    "boise",     "omaha",    "madison",   "raleigh",  "savannah",
    "tacoma",    "spokane",   "eugene",   "bend",      "paris",    "london",
    "tokyo",     "berlin",    "madrid",   "rome",      "dublin",   "oslo",
    "lisbon",    "vancouver", "toronto",  "montreal",  "kyoto",    "amsterdam",
    "barcelona", "prague",    "vienna",   "helsinki",  "reykjavik", "marseille",
    "france",    "japan",     "canada",   "brazil",    "spain",    "italy",
    "germany",   "mexico",    "india",    "kenya",     "norway",   "portugal",
    "ireland",   "scotland",  "iceland",  "peru",      "chile",    "vermont",
    "oregon",    "colorado",  "arizona",  "maine",     "ohio",     "utah",
};

const std::unordered_set<std::string_view> kFemale = {
    "sister",  "mom",    "mother",   "grandma", "grandmother", "aunt",
    "niece",   "wife",   "girlfriend", "daughter", "fiancee",  "stepmom",
    "godmother",
};

const std::unordered_set<std::string_view> kMale = {
    "brother", "dad",    "father",  "grandpa", "grandfather", "uncle",
    "nephew",  "husband", "boyfriend", "son",  "fiance",      "stepdad",
    "godfather",
};

const std::unordered_set<std::string_view> kPersonNeutral = {
    "friend",    "partner",  "cousin",   "boss",      "manager",   "coworker",
    "colleague", "neighbor", "roommate", "doctor",    "dentist",   "therapist",
    "coach",     "teacher",  "professor", "mentor",   "landlord",  "vet",
    "trainer",   "recruiter", "baby",    "kid",       "child",     "nurse",
    "twins",     "in-laws",  "parents",  "grandparents", "kids",   "children",
    "instructor", "tutor",   "midwife",  "surgeon",   "counselor", "pastor",
    "rabbi",     "teammate", "captain",  "barber",    "stylist",   "physio",
};

const std::unordered_set<std::string_view> kFirstNames = {
    "mia",   "priya", "luis",  "emma",  "noah",  "sofia", "ravi",  "hana",
    "omar",  "tessa", "felix", "nora",  "iris",  "leo",   "maya",  "arjun",
    "clara", "dane",  "elena", "marcus", "wren", "silas", "paulo", "ingrid",
    "tomas", "greta", "jonas", "lena",  "nico",  "asha",  "kenji", "yuki",
};

const std::unordered_set<std::string_view> kEvents = {
    "interview",   "appointment", "meeting",     "wedding",     "conference",
    "marathon",    "exam",        "surgery",     "checkup",     "funeral",
    "party",       "ceremony",    "recital",     "presentation", "review",
    "orientation", "audition",    "flight",      "trip",        "vacation",
    "reunion",     "deadline",    "launch",      "celebration", "graduation",
    "birthday",    "anniversary", "inspection",  "physical",    "session",
    "open",        "closing",     "race",        "tournament",  "match",
    "shower",      "housewarming", "retreat",    "seminar",     "webinar",
    "fair",        "festival",    "concert",     "gig",         "shift",
    "cleaning",    "filling",     "scan",        "biopsy",      "vaccination",
};

const std::unordered_set<std::string_view> kActivities = {
    "class",     "course",     "workshop",   "lesson",      "club",
    "practice",  "yoga",       "pottery",    "painting",    "running",
    "swimming",  "hiking",     "knitting",   "chess",       "guitar",
    "piano",     "choir",      "photography", "gardening",  "baking",
    "cycling",   "beekeeping", "birdwatching", "volunteering", "training",
    "program",   "bootcamp",   "league",     "spanish",     "italian",
    "french",    "japanese",   "ceramics",   "woodworking", "calligraphy",
    "pilates",   "spin",       "crossfit",   "climbing",    "rowing",
    "sketching", "journaling", "meditation", "tutoring",    "certification",
};

const std::unordered_set<std::string_view> kOrganizations = {
    "company",    "startup",  "firm",     "agency",   "studio",   "university",
    "college",    "school",   "hospital", "clinic",   "library",  "church",
    "nonprofit",  "bakery",   "restaurant", "cafe",   "gym",      "bank",
    "museum",     "lab",      "office",   "department", "shelter", "daycare",
    "practice",   "pharmacy", "inc",      "corp",     "llc",      "ltd",
    "co",         "institute", "academy", "foundation", "coop",   "collective",
};

}  // namespace

predicate_lexicon predicate_lexicon::base() {
    predicate_lexicon lex;
    for (const auto& e : kPredicates)
        lex.add(e.surface, rule{e.canonical, e.when_tag, e.update});
    return lex;
}

predicate_render render_info(const std::string& canonical) {
    static const std::unordered_map<std::string_view, predicate_render> table = [] {
        std::unordered_map<std::string_view, predicate_render> m;
        for (const auto& e : kRenders)
            m.emplace(e.canonical, predicate_render{e.third, e.speaker, e.q_verb});
        return m;
    }();
    auto it = table.find(canonical);
    if (it != table.end()) return it->second;
    predicate_render r;
    r.third = canonical;
    for (auto& c : r.third)
        if (c == '_') c = ' ';
    r.speaker = r.third;
    std::string first = r.third.substr(0, r.third.find(' '));
    if (first.size() > 1 && first.back() == 's') first.pop_back();
    r.q_verb = first;
    return r;
}

valence_lexicon valence_lexicon::base() {
    valence_lexicon lex;
    for (const char* w : kPositive) lex.add(w, 1);
    for (const char* w : kNegative) lex.add(w, -1);
    return lex;
}

namespace gazetteer {

bool place(std::string_view token) { return kPlaces.count(token) > 0; }
bool female_person(std::string_view token) { return kFemale.count(token) > 0; }
bool male_person(std::string_view token) { return kMale.count(token) > 0; }
bool first_name(std::string_view token) { return kFirstNames.count(token) > 0; }

bool person_term(std::string_view token) {
    return kFemale.count(token) > 0 || kMale.count(token) > 0 ||
           kPersonNeutral.count(token) > 0;
}

bool event_term(std::string_view token) { return kEvents.count(token) > 0; }
bool activity_term(std::string_view token) { return kActivities.count(token) > 0; }
bool organization_term(std::string_view token) { return kOrganizations.count(token) > 0; }

}  // namespace gazetteer

}  // namespace atant
