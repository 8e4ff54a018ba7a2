// Minimal out-of-process system speaking the evaluation line protocol:
// JSON requests on stdin, JSON responses on stdout. It wraps the
// reference engine through the C API but exposes only the mandatory
// operations — every introspection request is answered "unsupported",
// which is exactly how a black-box system looks to the harness.
//
// --always-refuse answers NO_PERSONAL_FACT to every question without
// touching a store, for exercising trap-only scoring.

#include <cstdlib>
#include <iostream>
#include <string>

#include "json.hpp"

#include "atant/atant.h"

namespace {

using nlohmann::ordered_json;

void respond(const ordered_json& j) {
    std::cout << j.dump() << "\n" << std::flush;
}

void respond_ok(ordered_json payload) { respond(ordered_json{{"ok", std::move(payload)}}); }

void respond_err(const std::string& message) { respond(ordered_json{{"err", message}}); }

}  // namespace

int main(int argc, char** argv) {
    bool always_refuse = false;
    std::string store_dir;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--always-refuse") {
            always_refuse = true;
        } else if (arg == "--store" && i + 1 < argc) {
            store_dir = argv[++i];
        } else {
            std::cerr << "usage: atant_sut_stub [--always-refuse] [--store DIR]\n";
            return 2;
        }
    }
    if (store_dir.empty()) {
        if (const char* env = std::getenv("ATANT_STORE_DIR")) store_dir = env;
    }

    atant_engine* engine = nullptr;
    if (!always_refuse) {
        if (store_dir.empty()) {
            std::cerr << "atant_sut_stub: no store directory (--store or ATANT_STORE_DIR)\n";
            return 2;
        }
        if (atant_engine_open(store_dir.c_str(), nullptr, &engine) != ATANT_OK) {
            std::cerr << "atant_sut_stub: " << atant_last_error() << "\n";
            return 2;
        }
    }

    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        ordered_json msg;
        try {
            msg = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            respond_err(std::string("bad request: ") + e.what());
            continue;
        }
        std::string op = msg.value("op", std::string());

        if (op == "begin_context") {
            if (!engine) {
                respond_ok(true);
                continue;
            }
            if (atant_engine_begin_context(engine, msg.value("context", std::string()).c_str()) !=
                ATANT_OK) {
                respond_err(atant_last_error());
            } else {
                respond_ok(true);
            }
        } else if (op == "ingest") {
            if (!engine) {
                respond_ok(true);
                continue;
            }
            if (atant_engine_ingest(engine, msg.value("utterance", std::string()).c_str(),
                                    msg.value("batch_time", std::string()).c_str()) != ATANT_OK) {
                respond_err(atant_last_error());
            } else {
                respond_ok(true);
            }
        } else if (op == "answer") {
            if (!engine) {
                respond_ok(ordered_json{{"text", "NO_PERSONAL_FACT"}});
                continue;
            }
            char* json_out = nullptr;
            if (atant_engine_answer(engine, msg.value("query", std::string()).c_str(),
                                    msg.value("ask_at", std::string()).c_str(),
                                    &json_out) != ATANT_OK) {
                respond_err(atant_last_error());
            } else {
                ordered_json payload = ordered_json::parse(json_out);
                atant_string_free(json_out);
                // Deliberately withhold traces_used: a black-box system
                // reports answer text only.
                respond_ok(ordered_json{{"text", payload["text"]}});
            }
        } else if (op == "restart") {
            if (!engine) {
                respond_ok(true);
                continue;
            }
            if (atant_engine_restart(engine) != ATANT_OK) {
                respond_err(atant_last_error());
            } else {
                respond_ok(true);
            }
        } else {
            respond_err("unsupported");
        }
    }

    if (engine) atant_engine_free(engine);
    return 0;
}
