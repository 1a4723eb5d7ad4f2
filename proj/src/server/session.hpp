#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "server/action.hpp"
#include "server/document.hpp"
#include "synth/synth.hpp"

namespace manipos {

/// Snapshots of whole file texts for undo and redo.
class History {
public:
    explicit History(std::size_t depth = 200) : depth_(depth) {}

    /// Records the text an edit is about to replace. Clears the redo stack.
    void push(std::string before);
    /// The text to restore, or nothing when there is nothing to undo.
    std::optional<std::string> undo(std::string current);
    std::optional<std::string> redo(std::string current);

    std::size_t undoDepth() const { return undo_.size(); }
    std::size_t redoDepth() const { return redo_.size(); }

private:
    std::size_t depth_;
    std::deque<std::string> undo_;
    std::deque<std::string> redo_;
};

struct SessionOptions {
    FuelPolicy fuel;
    double synthTimeoutSeconds = 10;
    const PcfgModel* pcfg = nullptr;
    std::size_t historyDepth = 200;
};

struct ActionOutcome {
    std::string text;
    std::string token;
};

/// One file being edited. Every mutation goes through one lock, reads the
/// file, writes it back atomically and pushes history.
class FileSession {
public:
    FileSession(std::filesystem::path path, SessionOptions opts);
    ~FileSession();
    FileSession(const FileSession&) = delete;
    FileSession& operator=(const FileSession&) = delete;

    /// Throws ActionError.
    ActionOutcome handle(const Action& a);
    /// The rendered document with `token`, `error` and `synth` fields.
    /// When the file does not parse, the last good render plus the banner.
    nlohmann::json document();
    nlohmann::json autocomplete(NodeId context, const std::string& prefix);

    std::string token();
    /// Blocks until the token differs from `token` or the timeout passes; returns the current token.
    std::string waitForChange(const std::string& token, std::chrono::milliseconds timeout);
    /// Re-reads the file; returns whether its bytes changed. Throws ActionError(FileVanished).
    bool refresh();

    /// Starts a background synthesis job; at most one runs per file. Returns the job id.
    std::string startSynth();
    nlohmann::json synthStatus(const std::string& jobId);
    /// Waits for the running job, if any.
    void joinSynth();

    const std::filesystem::path& path() const { return path_; }
    const History& history() const { return history_; }

private:
    struct Job {
        std::string id;
        std::string status = "running";  // running, done, failed, stale, cancelled
        std::string reason;
        SynthStats stats;
    };

    std::filesystem::path path_;
    SessionOptions opts_;
    std::mutex m_;
    std::condition_variable changed_;
    std::string text_;
    std::string lastGood_;
    std::optional<std::string> parseError_;
    bool vanished_ = false;
    FocusMap focus_;
    History history_;
    std::string token_;
    std::optional<std::pair<std::string, nlohmann::json>> cache_;  // token, document

    std::map<std::string, Job> jobs_;
    std::string runningJob_;
    int jobCounter_ = 0;
    std::thread worker_;
    std::atomic<bool> cancel_{false};

    void loadLocked(std::string text);
    void writeLocked(const std::string& text);
    void retokenLocked();
    bool refreshLocked();
    Program synthesizeProgram(const Program& p, SynthStats* stats, std::atomic<bool>* cancel);
};

/// The files of one directory, with a background watcher.
class Workspace {
public:
    explicit Workspace(std::filesystem::path dir, SessionOptions opts = {},
                       std::chrono::milliseconds watchInterval = std::chrono::milliseconds(200));
    ~Workspace();
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    /// Throws ActionError(UnknownFile) for names outside the directory or missing files.
    FileSession& open(const std::string& name);
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    SessionOptions opts_;
    std::mutex m_;
    std::map<std::string, std::unique_ptr<FileSession>> sessions_;
    std::atomic<bool> stop_{false};
    std::mutex waitM_;
    std::condition_variable wake_;
    std::thread watcher_;
};

/// 16 hex digits of FNV-1a over `s`.
std::string contentHash(const std::string& s);

}  // namespace manipos
