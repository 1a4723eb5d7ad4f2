#include "manipos/manipos.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "interp/interp.hpp"
#include "nonlinear/nonlinear.hpp"
#include "server/http.hpp"
#include "server/session.hpp"
#include "syntax/parse.hpp"
#include "syntax/print.hpp"
#include "synth/synth.hpp"

using namespace manipos;
using json = nlohmann::json;

struct manipos_session {
    std::unique_ptr<FileSession> session;
};

struct manipos_server {
    std::optional<PcfgModel> pcfg;
    std::unique_ptr<Workspace> ws;
    std::unique_ptr<HttpServer> http;
    std::thread thread;
    int port = 0;
};

namespace {

thread_local std::string lastError;

manipos_status fail(manipos_status s, const std::string& message) {
    lastError = message;
    return s;
}

manipos_status statusOfKind(const std::string& kind) {
    static const std::map<std::string, manipos_status> table = {
        {"ParseError", MANIPOS_E_PARSE},        {"InvalidAction", MANIPOS_E_INVALID_ACTION},
        {"DuplicateName", MANIPOS_E_DUPLICATE_NAME}, {"UnknownNode", MANIPOS_E_UNKNOWN_NODE},
        {"StaleNode", MANIPOS_E_STALE_NODE},    {"UnknownFile", MANIPOS_E_UNKNOWN_FILE},
        {"UnknownJob", MANIPOS_E_UNKNOWN_JOB},  {"Busy", MANIPOS_E_BUSY},
        {"FileVanished", MANIPOS_E_FILE_VANISHED}, {"NoResult", MANIPOS_E_NO_RESULT},
        {"IoError", MANIPOS_E_IO},
    };
    auto it = table.find(kind);
    return it == table.end() ? MANIPOS_E_INTERNAL : it->second;
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

template <class F>
manipos_status guarded(F&& f) {
    try {
        f();
        return MANIPOS_OK;
    } catch (const ParseError& e) {
        return fail(MANIPOS_E_PARSE, e.what());
    } catch (const ActionError& e) {
        return fail(statusOfKind(e.kind), e.what());
    } catch (const NoResult& e) {
        switch (e.reason) {
            case NoResultReason::Timeout: return fail(MANIPOS_E_TIMEOUT, e.what());
            case NoResultReason::Cancelled: return fail(MANIPOS_E_CANCELLED, e.what());
            case NoResultReason::SearchExhausted: break;
        }
        return fail(MANIPOS_E_NO_RESULT, e.what());
    } catch (const UnknownNode& e) {
        return fail(MANIPOS_E_UNKNOWN_NODE, e.what());
    } catch (const PcfgError& e) {
        return fail(MANIPOS_E_IO, e.what());
    } catch (const std::exception& e) {
        return fail(MANIPOS_E_INTERNAL, e.what());
    }
}

FuelPolicy fuelOf(int fuel) {
    FuelPolicy f;
    if (fuel > 0) f.perTopBinding = fuel;
    return f;
}

const char* verdictName(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Indeterminate: break;
    }
    return "indeterminate";
}

}  // namespace

extern "C" {

const char* manipos_last_error(void) { return lastError.c_str(); }

const char* manipos_status_name(manipos_status s) {
    switch (s) {
        case MANIPOS_OK: return "ok";
        case MANIPOS_E_ARGUMENT: return "argument";
        case MANIPOS_E_PARSE: return "parse error";
        case MANIPOS_E_INVALID_ACTION: return "invalid action";
        case MANIPOS_E_DUPLICATE_NAME: return "duplicate name";
        case MANIPOS_E_UNKNOWN_NODE: return "unknown node";
        case MANIPOS_E_STALE_NODE: return "stale node";
        case MANIPOS_E_UNKNOWN_FILE: return "unknown file";
        case MANIPOS_E_UNKNOWN_JOB: return "unknown job";
        case MANIPOS_E_BUSY: return "busy";
        case MANIPOS_E_FILE_VANISHED: return "file vanished";
        case MANIPOS_E_NO_RESULT: return "no result";
        case MANIPOS_E_TIMEOUT: return "timeout";
        case MANIPOS_E_CANCELLED: return "cancelled";
        case MANIPOS_E_IO: return "io error";
        case MANIPOS_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* manipos_version(void) { return "0.1.0"; }

void manipos_free(char* s) { std::free(s); }

manipos_status manipos_format(const char* text, char** out) {
    if (!text || !out) return fail(MANIPOS_E_ARGUMENT, "null argument");
    return guarded([&] { *out = dup(printProgram(parseProgram(text))); });
}

manipos_status manipos_normalize(const char* text, char** out) {
    if (!text || !out) return fail(MANIPOS_E_ARGUMENT, "null argument");
    return guarded([&] { *out = dup(printProgram(normalizeProgram(parseProgram(text)))); });
}

manipos_status manipos_run(const char* text, int fuel, char** out_json) {
    if (!text || !out_json) return fail(MANIPOS_E_ARGUMENT, "null argument");
    return guarded([&] {
        auto prog = std::make_shared<const Program>(parseProgram(text));
        RunOptions ro;
        ro.fuel = fuelOf(fuel);
        ro.trace = true;
        RunResult r = run(prog, ro);
        json bindings = json::array();
        for (const auto& item : prog->items) {
            if (item.kind != ItemKind::Binding) continue;
            auto vs = valuesAt(r, item.expr.id, 0u);
            bindings.push_back({{"name", printPattern(item.pat)},
                                {"value", vs.empty() ? json(nullptr) : json(printValue(*vs.back()))}});
        }
        json asserts = json::array();
        for (const auto& a : r.asserts) {
            std::string shown;
            for (const auto& item : prog->items)
                if (item.id == a.item) shown = printExpr(item.expr) + " = " + printExpr(item.expected);
            asserts.push_back({{"text", shown},
                               {"state", verdictName(a.passed)},
                               {"actual", a.actual ? json(printValue(*a.actual)) : json(nullptr)},
                               {"expected", a.expected ? json(printValue(*a.expected)) : json(nullptr)}});
        }
        *out_json = dup(json{{"bindings", bindings}, {"asserts", asserts}, {"steps", r.stepsUsed}}.dump());
    });
}

manipos_status manipos_synthesize(const char* text, const manipos_synth_options* opts, char** out) {
    if (!text || !out) return fail(MANIPOS_E_ARGUMENT, "null argument");
    return guarded([&] {
        SynthOptions so;
        std::optional<PcfgModel> pcfg;
        if (opts) {
            if (opts->round_timeout_s > 0) so.roundTimeoutSeconds = opts->round_timeout_s;
            if (opts->cap_s > 0) so.capSeconds = opts->cap_s;
            so.fuel = fuelOf(opts->fuel);
            if (opts->pcfg_path) {
                pcfg = PcfgModel::load(opts->pcfg_path);
                so.pcfg = &*pcfg;
            }
        }
        *out = dup(printProgram(synthesize(parseProgram(text), so)));
    });
}

manipos_status manipos_session_open(const char* path, int fuel, manipos_session** out) {
    if (!path || !out) return fail(MANIPOS_E_ARGUMENT, "null argument");
    return guarded([&] {
        SessionOptions so;
        so.fuel = fuelOf(fuel);
        auto s = std::make_unique<manipos_session>();
        s->session = std::make_unique<FileSession>(path, so);
        *out = s.release();
    });
}

manipos_status manipos_session_action(manipos_session* s, const char* action_json, char** out_json) {
    if (!s || !action_json || !out_json) return fail(MANIPOS_E_ARGUMENT, "null argument");
    return guarded([&] {
        ActionOutcome o = s->session->handle(parseAction(action_json));
        *out_json = dup(json{{"text", o.text}, {"token", o.token}}.dump());
    });
}

manipos_status manipos_session_document(manipos_session* s, char** out_json) {
    if (!s || !out_json) return fail(MANIPOS_E_ARGUMENT, "null argument");
    return guarded([&] { *out_json = dup(s->session->document().dump()); });
}

void manipos_session_close(manipos_session* s) { delete s; }

manipos_status manipos_server_start(const char* dir, const manipos_server_options* opts, manipos_server** out) {
    if (!dir || !out) return fail(MANIPOS_E_ARGUMENT, "null argument");
    return guarded([&] {
        auto srv = std::make_unique<manipos_server>();
        SessionOptions so;
        ServerOptions ho;
        if (opts) {
            if (opts->host) ho.host = opts->host;
            ho.port = opts->port;
            so.fuel = fuelOf(opts->fuel);
            if (opts->synth_timeout_s > 0) so.synthTimeoutSeconds = opts->synth_timeout_s;
            if (opts->pcfg_path) {
                srv->pcfg = PcfgModel::load(opts->pcfg_path);
                so.pcfg = &*srv->pcfg;
            }
        } else {
            ho.port = 0;
        }
        if (!std::filesystem::is_directory(dir)) throw ActionError("UnknownFile", 404, std::string("not a directory: ") + dir);
        srv->ws = std::make_unique<Workspace>(dir, so);
        srv->http = std::make_unique<HttpServer>(*srv->ws, ho);
        srv->port = srv->http->bind();
        if (srv->port < 0) throw ActionError("IoError", 500, "cannot bind " + ho.host + ":" + std::to_string(ho.port));
        HttpServer* http = srv->http.get();
        srv->thread = std::thread([http] { http->serve(); });
        *out = srv.release();
    });
}

int manipos_server_port(const manipos_server* s) { return s ? s->port : -1; }

void manipos_server_stop(manipos_server* s) {
    if (!s) return;
    s->http->stop();
    if (s->thread.joinable()) s->thread.join();
    delete s;
}

}  // extern "C"
