#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "manipos/manipos.h"

namespace {

struct Owned {
    char* p = nullptr;
    ~Owned() { manipos_free(p); }
};

std::string readFile(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void writeFile(const std::string& path, const std::string& text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f || !(f << text)) throw std::runtime_error("cannot write " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot replace " + path);
}

int report(manipos_status s) {
    std::cerr << "manipos: " << manipos_status_name(s) << ": " << manipos_last_error() << "\n";
    return 2;
}

int defaultPort() {
    if (const char* v = std::getenv("MANIPOS_PORT")) {
        char* end = nullptr;
        long p = std::strtol(v, &end, 10);
        if (*v && *end == '\0' && p > 0 && p <= 65535) return static_cast<int>(p);
    }
    return 1111;
}

int transform(const std::string& file, bool inPlace, manipos_status (*f)(const char*, char**)) {
    std::string text = readFile(file);
    Owned out;
    if (manipos_status s = f(text.c_str(), &out.p)) return report(s);
    if (inPlace)
        writeFile(file, out.p);
    else
        std::cout << out.p;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Live programming with values, traces and example-driven synthesis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", manipos_version());

    std::string file;
    bool inPlace = false;
    int fuel = 1000;

    auto* serve = app.add_subcommand("serve", "Serve the files of a directory over HTTP");
    std::string dir = ".";
    std::string host = "127.0.0.1";
    int port = defaultPort();
    std::string pcfg;
    double synthTimeout = 10;
    serve->add_option("dir", dir, "Directory of programs")->check(CLI::ExistingDirectory);
    serve->add_option("--host", host, "Address to bind");
    serve->add_option("--port", port, "Port to listen on (MANIPOS_PORT)")->check(CLI::Range(0, 65535));
    serve->add_option("--pcfg", pcfg, "Probability table for synthesis")->check(CLI::ExistingFile);
    serve->add_option("--synth-timeout-s", synthTimeout, "Per-round synthesis timeout in seconds");
    serve->add_option("--fuel", fuel, "Evaluation steps per top-level binding");

    auto* fmt = app.add_subcommand("fmt", "Print a program in canonical layout");
    fmt->add_option("file", file)->required()->check(CLI::ExistingFile);
    fmt->add_flag("-i,--in-place", inPlace, "Rewrite the file");

    auto* normalize = app.add_subcommand("normalize", "Reorder bindings and normalize case splits");
    normalize->add_option("file", file)->required()->check(CLI::ExistingFile);
    normalize->add_flag("-i,--in-place", inPlace, "Rewrite the file");

    auto* runCmd = app.add_subcommand("run", "Evaluate a program and report assertions");
    bool asJson = false;
    runCmd->add_option("file", file)->required()->check(CLI::ExistingFile);
    runCmd->add_option("--fuel", fuel, "Evaluation steps per top-level binding");
    runCmd->add_flag("--json", asJson, "Print the result as JSON");

    auto* synth = app.add_subcommand("synth", "Fill holes so that every assertion passes");
    double roundTimeout = 10, cap = 40;
    synth->add_option("file", file)->required()->check(CLI::ExistingFile);
    synth->add_option("--timeout-s", roundTimeout, "Per-round timeout in seconds");
    synth->add_option("--cap-s", cap, "Overall time limit in seconds");
    synth->add_option("--pcfg", pcfg, "Probability table")->check(CLI::ExistingFile);
    synth->add_option("--fuel", fuel, "Evaluation steps per top-level binding");
    synth->add_flag("-i,--in-place", inPlace, "Rewrite the file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fmt) return transform(file, inPlace, manipos_format);
        if (*normalize) return transform(file, inPlace, manipos_normalize);

        if (*runCmd) {
            std::string text = readFile(file);
            Owned out;
            if (manipos_status s = manipos_run(text.c_str(), fuel, &out.p)) return report(s);
            auto j = nlohmann::json::parse(out.p);
            bool ok = true;
            for (const auto& a : j["asserts"]) ok = ok && a["state"] == "pass";
            if (asJson) {
                std::cout << j.dump(2) << "\n";
                return ok ? 0 : 1;
            }
            for (const auto& b : j["bindings"])
                std::cout << b["name"].get<std::string>() << " = "
                          << (b["value"].is_null() ? "<not evaluated>" : b["value"].get<std::string>()) << "\n";
            for (const auto& a : j["asserts"]) {
                std::cout << a["state"].get<std::string>() << ": " << a["text"].get<std::string>();
                if (a["state"] != "pass" && !a["actual"].is_null()) std::cout << "  (got " << a["actual"].get<std::string>() << ")";
                std::cout << "\n";
            }
            return ok ? 0 : 1;
        }

        if (*synth) {
            std::string text = readFile(file);
            manipos_synth_options so{roundTimeout, cap, fuel, pcfg.empty() ? nullptr : pcfg.c_str()};
            Owned out;
            if (manipos_status s = manipos_synthesize(text.c_str(), &so, &out.p)) return report(s);
            if (inPlace)
                writeFile(file, out.p);
            else
                std::cout << out.p;
            return 0;
        }

        if (*serve) {
            sigset_t set;
            sigemptyset(&set);
            sigaddset(&set, SIGINT);
            sigaddset(&set, SIGTERM);
            pthread_sigmask(SIG_BLOCK, &set, nullptr);

            manipos_server_options so{host.c_str(), port, fuel, synthTimeout, pcfg.empty() ? nullptr : pcfg.c_str()};
            manipos_server* srv = nullptr;
            if (manipos_status s = manipos_server_start(dir.c_str(), &so, &srv)) return report(s);
            std::cerr << "serving " << dir << " at http://" << host << ":" << manipos_server_port(srv) << "/<file>\n";
            int sig = 0;
            sigwait(&set, &sig);
            manipos_server_stop(srv);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "manipos: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
