#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/sim_time.hpp"
#include "core/store.hpp"

namespace testutil {

/// Unique scratch directory, removed recursively on destruction.
class temp_dir {
  public:
    temp_dir() {
        auto base = std::filesystem::temp_directory_path() / "atant-test-XXXXXX";
        std::string tmpl = base.string();
        if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed: " + tmpl);
        path_ = tmpl;
    }
    ~temp_dir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    temp_dir(const temp_dir&) = delete;
    temp_dir& operator=(const temp_dir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::filesystem::path sub(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

inline atant::sim_time at(const std::string& iso) {
    auto t = atant::parse_sim_time(iso);
    if (!t) throw std::runtime_error("bad test timestamp: " + iso);
    return *t;
}

/// Minimal valid trace; tweak fields after construction as needed.
inline atant::fact_trace make_trace(std::string context, std::string subject,
                                    std::string predicate, std::string object,
                                    const std::string& stored_at_iso) {
    atant::fact_trace t;
    t.context = std::move(context);
    t.subject = std::move(subject);
    t.predicate = std::move(predicate);
    t.object = std::move(object);
    t.type_tags = {"object"};
    t.stored_at = at(stored_at_iso);
    t.predicted_queries = {"tell me about my " + t.subject};
    t.source_text = t.subject + " " + t.predicate + " " + t.object;
    return t;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace testutil
