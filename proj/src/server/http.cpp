#include "server/http.hpp"

#include <cstdlib>
#include <mutex>

#include <httplib.h>

namespace manipos {

using json = nlohmann::json;

namespace {

const char* kShell = R"HTML(<!doctype html>
<html>
<head><meta charset="utf-8"><title>manipos</title></head>
<body>
<pre id="doc">loading</pre>
<script>
const file = location.pathname.slice(1);
let token = "";
async function refresh() {
  const r = await fetch(`/api/${file}/doc`);
  const d = await r.json();
  token = d.token || "";
  document.getElementById("doc").textContent = d.error ? d.error.message + "\n\n" + d.text : d.text;
}
async function poll() {
  for (;;) {
    try {
      const r = await fetch(`/api/${file}/poll?token=${token}`);
      const d = await r.json();
      if (d.changed) await refresh();
    } catch (e) {
      await new Promise(res => setTimeout(res, 1000));
    }
  }
}
refresh().then(poll);
</script>
</body>
</html>
)HTML";

void sendJson(httplib::Response& res, const json& j, int status = 200) {
    res.status = status;
    res.set_content(j.dump(), "application/json; charset=utf-8");
}

void sendError(httplib::Response& res, const ActionError& e) {
    sendJson(res, {{"error", e.kind}, {"message", e.what()}}, e.status);
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const ActionError& e) {
        sendError(res, e);
    } catch (const ParseError& e) {
        sendError(res, ActionError("ParseError", 400, e.what()));
    } catch (const std::exception& e) {
        sendError(res, ActionError("InternalError", 500, e.what()));
    }
}

}  // namespace

int portFromEnv(int fallback) {
    const char* v = std::getenv("MANIPOS_PORT");
    if (!v || !*v) return fallback;
    char* end = nullptr;
    long p = std::strtol(v, &end, 10);
    if (*end != '\0' || p <= 0 || p > 65535) return fallback;
    return static_cast<int>(p);
}

struct HttpServer::Impl {
    Workspace& ws;
    ServerOptions opts;
    httplib::Server srv;
    std::mutex lifecycle;
    bool serving = false;
    bool stopped = false;

    Impl(Workspace& w, ServerOptions o) : ws(w), opts(o) {
        srv.Get(R"(/api/([^/]+)/doc)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { sendJson(res, ws.open(req.matches[1]).document()); });
        });
        srv.Get(R"(/api/([^/]+)/poll)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                FileSession& s = ws.open(req.matches[1]);
                std::string seen = req.has_param("token") ? req.get_param_value("token") : "";
                std::string now = s.waitForChange(seen, opts.pollTimeout);
                sendJson(res, {{"token", now}, {"changed", now != seen}});
            });
        });
        srv.Get(R"(/api/([^/]+)/autocomplete)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                FileSession& s = ws.open(req.matches[1]);
                std::uint32_t node = 0;
                if (req.has_param("node")) {
                    try {
                        node = static_cast<std::uint32_t>(std::stoul(req.get_param_value("node")));
                    } catch (const std::exception&) {
                        throw ActionError("InvalidAction", 400, "bad node id");
                    }
                }
                std::string prefix = req.has_param("prefix") ? req.get_param_value("prefix") : "";
                sendJson(res, s.autocomplete(NodeId{node}, prefix));
            });
        });
        srv.Post(R"(/api/([^/]+)/action)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                FileSession& s = ws.open(req.matches[1]);
                ActionOutcome out = s.handle(parseAction(req.body));
                sendJson(res, {{"text", out.text}, {"token", out.token}});
            });
        });
        srv.Post(R"(/api/([^/]+)/synth)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { sendJson(res, {{"jobId", ws.open(req.matches[1]).startSynth()}}, 202); });
        });
        srv.Get(R"(/api/([^/]+)/synth/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { sendJson(res, ws.open(req.matches[1]).synthStatus(req.matches[2])); });
        });
        srv.Get(R"(/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                ws.open(req.matches[1]);
                res.set_content(kShell, "text/html; charset=utf-8");
            });
        });
    }
};

HttpServer::HttpServer(Workspace& ws, ServerOptions opts) : impl_(std::make_unique<Impl>(ws, opts)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
    if (impl_->opts.port == 0) return impl_->srv.bind_to_any_port(impl_->opts.host);
    return impl_->srv.bind_to_port(impl_->opts.host, impl_->opts.port) ? impl_->opts.port : -1;
}

void HttpServer::serve() {
    {
        std::lock_guard lk(impl_->lifecycle);
        if (impl_->stopped) return;
        impl_->serving = true;
    }
    impl_->srv.listen_after_bind();
}

void HttpServer::stop() {
    if (!impl_) return;
    {
        std::lock_guard lk(impl_->lifecycle);
        impl_->stopped = true;
        if (!impl_->serving) return;
    }
    impl_->srv.wait_until_ready();
    impl_->srv.stop();
}

}  // namespace manipos
