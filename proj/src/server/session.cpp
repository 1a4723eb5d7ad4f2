#include "server/session.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "syntax/parse.hpp"
#include "syntax/print.hpp"

namespace manipos {

using json = nlohmann::json;

std::string contentHash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void History::push(std::string before) {
    undo_.push_back(std::move(before));
    if (undo_.size() > depth_) undo_.pop_front();
    redo_.clear();
}

std::optional<std::string> History::undo(std::string current) {
    if (undo_.empty()) return std::nullopt;
    std::string t = std::move(undo_.back());
    undo_.pop_back();
    redo_.push_back(std::move(current));
    return t;
}

std::optional<std::string> History::redo(std::string current) {
    if (redo_.empty()) return std::nullopt;
    std::string t = std::move(redo_.back());
    redo_.pop_back();
    undo_.push_back(std::move(current));
    if (undo_.size() > depth_) undo_.pop_front();
    return t;
}

namespace {

std::optional<std::string> readFile(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) return std::nullopt;
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ActionError vanished(const std::filesystem::path& p) {
    return ActionError("FileVanished", 410, p.filename().string() + " no longer exists");
}

const char* reasonName(NoResultReason r) {
    switch (r) {
        case NoResultReason::Timeout: return "Timeout";
        case NoResultReason::SearchExhausted: return "SearchExhausted";
        case NoResultReason::Cancelled: return "Cancelled";
    }
    return "";
}

json statsJson(const SynthStats& s) {
    return {{"rounds", s.rounds},
            {"bound", s.lastBound},
            {"tested", s.candidatesTested},
            {"probability", s.probability},
            {"seconds", s.seconds}};
}

}  // namespace

FileSession::FileSession(std::filesystem::path path, SessionOptions opts)
    : path_(std::move(path)), opts_(opts), history_(opts.historyDepth) {
    std::optional<std::string> text = readFile(path_);
    if (!text) throw vanished(path_);
    std::lock_guard<std::mutex> lk(m_);
    loadLocked(std::move(*text));
}

FileSession::~FileSession() {
    cancel_ = true;
    if (worker_.joinable()) worker_.join();
}

void FileSession::loadLocked(std::string text) {
    text_ = std::move(text);
    vanished_ = false;
    try {
        parseProgram(text_);
        lastGood_ = text_;
        parseError_.reset();
    } catch (const ParseError& e) {
        parseError_ = e.what();
    }
    retokenLocked();
}

void FileSession::retokenLocked() {
    std::string state = text_;
    state += '\0';
    for (const auto& [fn, frame] : focus_) state += std::to_string(fn.value) + ":" + std::to_string(frame) + ";";
    state += '\0';
    if (!runningJob_.empty()) state += "job:" + runningJob_;
    else if (jobCounter_ > 0) state += "last:" + jobs_["j" + std::to_string(jobCounter_)].status;
    if (vanished_) state += std::string("\0gone", 5);
    std::string next = contentHash(state);
    if (next != token_) {
        token_ = next;
        changed_.notify_all();
    }
}

void FileSession::writeLocked(const std::string& text) {
    std::filesystem::path tmp = path_;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ActionError("IoError", 500, "cannot write " + tmp.string());
        f << text;
        f.flush();
        if (!f) throw ActionError("IoError", 500, "cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path_, ec);
    if (ec) throw ActionError("IoError", 500, "cannot replace " + path_.string() + ": " + ec.message());
    loadLocked(text);
}

bool FileSession::refreshLocked() {
    std::optional<std::string> text = readFile(path_);
    if (!text) {
        if (!vanished_) {
            vanished_ = true;
            retokenLocked();
        }
        throw vanished(path_);
    }
    if (*text == text_ && !vanished_) return false;
    bool changed = *text != text_;
    loadLocked(std::move(*text));
    return changed;
}

bool FileSession::refresh() {
    std::lock_guard<std::mutex> lk(m_);
    return refreshLocked();
}

std::string FileSession::token() {
    std::lock_guard<std::mutex> lk(m_);
    return token_;
}

std::string FileSession::waitForChange(const std::string& token, std::chrono::milliseconds timeout) {
    std::unique_lock<std::mutex> lk(m_);
    changed_.wait_for(lk, timeout, [&] { return token_ != token; });
    if (vanished_) throw vanished(path_);
    return token_;
}

Program FileSession::synthesizeProgram(const Program& p, SynthStats* stats, std::atomic<bool>* cancel) {
    SynthOptions o;
    o.roundTimeoutSeconds = opts_.synthTimeoutSeconds;
    o.fuel = opts_.fuel;
    o.pcfg = opts_.pcfg;
    o.cancel = cancel;
    try {
        return synthesize(p, o, stats);
    } catch (const NoResult& e) {
        throw ActionError("NoResult", 422, std::string("no program found: ") + reasonName(e.reason));
    }
}

ActionOutcome FileSession::handle(const Action& a) {
    std::lock_guard<std::mutex> lk(m_);
    refreshLocked();

    if (a.kind == ActionKind::Undo || a.kind == ActionKind::Redo) {
        std::optional<std::string> t = a.kind == ActionKind::Undo ? history_.undo(text_) : history_.redo(text_);
        if (t) writeLocked(*t);
        return {text_, token_};
    }
    if (parseError_) throw ActionError("ParseError", 400, "the file does not parse: " + *parseError_);
    Program p = parseProgram(text_);

    if (a.kind == ActionKind::FocusFrame) {
        if (!functionOfBinding(p, a.node)) {
            bool stale = !a.token.empty() && a.token != token_;
            throw ActionError(stale ? "StaleNode" : "UnknownNode", stale ? 409 : 404,
                              "no function binding " + std::to_string(a.node.value));
        }
        focus_[a.node] = a.frame;
        retokenLocked();
        return {text_, token_};
    }

    auto shared = std::make_shared<const Program>(p);
    std::optional<RunResult> ran;
    EditContext ctx;
    ctx.currentToken = token_;
    ctx.run = [&]() -> const RunResult& {
        if (!ran) {
            RunOptions ro;
            ro.fuel = opts_.fuel;
            ran = run(shared, ro);
        }
        return *ran;
    };
    ctx.synthesize = [&](const Program& q) { return synthesizeProgram(q, nullptr, nullptr); };
    std::string next = applyEdit(p, a, ctx);
    history_.push(text_);
    try {
        writeLocked(next);
    } catch (...) {
        history_.undo(text_);
        throw;
    }
    return {text_, token_};
}

json FileSession::document() {
    std::lock_guard<std::mutex> lk(m_);
    refreshLocked();
    if (cache_ && cache_->first == token_) return cache_->second;
    RenderOptions ro;
    ro.fuel = opts_.fuel;
    json doc = renderDocument(parseError_ ? lastGood_ : text_, focus_, ro);
    doc["file"] = path_.filename().string();
    doc["token"] = token_;
    doc["error"] = parseError_ ? json{{"kind", "ParseError"}, {"message", *parseError_}} : json(nullptr);
    json focus = json::object();
    for (const auto& [fn, frame] : focus_) focus[std::to_string(fn.value)] = frame;
    doc["focus"] = focus;
    json synth = nullptr;
    if (jobCounter_ > 0) {
        const Job& j = jobs_["j" + std::to_string(jobCounter_)];
        synth = {{"jobId", j.id}, {"status", j.status}, {"reason", j.reason}};
    }
    doc["synth"] = synth;
    cache_ = std::make_pair(token_, doc);
    return doc;
}

json FileSession::autocomplete(NodeId context, const std::string& prefix) {
    std::lock_guard<std::mutex> lk(m_);
    refreshLocked();
    RenderOptions ro;
    ro.fuel = opts_.fuel;
    return manipos::autocomplete(parseError_ ? lastGood_ : text_, context, prefix, focus_, ro);
}

std::string FileSession::startSynth() {
    std::unique_lock<std::mutex> lk(m_);
    refreshLocked();
    if (!runningJob_.empty()) throw ActionError("Busy", 409, "synthesis job " + runningJob_ + " is still running");
    if (parseError_) throw ActionError("ParseError", 400, "the file does not parse: " + *parseError_);
    Program p = parseProgram(text_);
    std::string id = "j" + std::to_string(++jobCounter_);
    jobs_[id].id = id;
    runningJob_ = id;
    std::string snapshot = text_;
    cancel_ = false;
    retokenLocked();
    if (worker_.joinable()) {
        lk.unlock();
        worker_.join();
        lk.lock();
    }
    worker_ = std::thread([this, id, snapshot, p] {
        SynthStats stats;
        std::string status = "done", reason;
        std::optional<Program> out;
        try {
            out = synthesizeProgram(p, &stats, &cancel_);
        } catch (const ActionError& e) {
            status = cancel_ ? "cancelled" : "failed";
            reason = e.what();
        } catch (const std::exception& e) {
            status = "failed";
            reason = e.what();
        }
        std::lock_guard<std::mutex> g(m_);
        if (out) {
            try {
                refreshLocked();
                if (text_ != snapshot) {
                    status = "stale";
                    reason = "the file changed while synthesizing";
                } else {
                    Action a;
                    a.kind = ActionKind::Synth;
                    EditContext ctx;
                    ctx.currentToken = token_;
                    ctx.synthesize = [&](const Program&) { return *out; };
                    std::string next = applyEdit(p, a, ctx);
                    history_.push(text_);
                    writeLocked(next);
                }
            } catch (const std::exception& e) {
                status = "failed";
                reason = e.what();
            }
        }
        Job& j = jobs_[id];
        j.status = status;
        j.reason = reason;
        j.stats = stats;
        runningJob_.clear();
        retokenLocked();
    });
    return id;
}

json FileSession::synthStatus(const std::string& jobId) {
    std::lock_guard<std::mutex> lk(m_);
    auto it = jobs_.find(jobId);
    if (it == jobs_.end()) throw ActionError("UnknownJob", 404, "no synthesis job " + jobId);
    const Job& j = it->second;
    return {{"jobId", j.id}, {"status", j.status}, {"reason", j.reason}, {"stats", statsJson(j.stats)}};
}

void FileSession::joinSynth() {
    std::thread t;
    {
        std::lock_guard<std::mutex> lk(m_);
        t = std::move(worker_);
    }
    if (t.joinable()) t.join();
}

Workspace::Workspace(std::filesystem::path dir, SessionOptions opts, std::chrono::milliseconds interval)
    : dir_(std::move(dir)), opts_(opts) {
    watcher_ = std::thread([this, interval] {
        while (!stop_) {
            {
                std::unique_lock<std::mutex> lk(waitM_);
                wake_.wait_for(lk, interval, [&] { return stop_.load(); });
            }
            if (stop_) break;
            std::vector<FileSession*> all;
            {
                std::lock_guard<std::mutex> lk(m_);
                for (auto& [name, s] : sessions_) all.push_back(s.get());
            }
            for (FileSession* s : all) {
                try {
                    s->refresh();
                } catch (const ActionError&) {
                }
            }
        }
    });
}

Workspace::~Workspace() {
    {
        std::lock_guard<std::mutex> lk(waitM_);
        stop_ = true;
    }
    wake_.notify_all();
    watcher_.join();
}

FileSession& Workspace::open(const std::string& name) {
    bool plain = !name.empty() && name[0] != '.' && name.find('/') == std::string::npos &&
                 name.find('\\') == std::string::npos && name.find('\0') == std::string::npos;
    if (!plain) throw ActionError("UnknownFile", 404, "bad file name `" + name + "`");
    std::lock_guard<std::mutex> lk(m_);
    auto it = sessions_.find(name);
    if (it != sessions_.end()) return *it->second;
    std::filesystem::path p = dir_ / name;
    if (!std::filesystem::is_regular_file(p)) throw ActionError("UnknownFile", 404, "no file `" + name + "`");
    auto s = std::make_unique<FileSession>(p, opts_);
    FileSession& ref = *s;
    sessions_.emplace(name, std::move(s));
    return ref;
}

}  // namespace manipos
