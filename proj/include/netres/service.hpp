#pragma once

#include <map>
#include <memory>
#include <string>

#include "netres/workspace.hpp"

namespace netres {

// In-memory supervision service. handle() is the whole API; the HTTP layer
// only forwards requests to it.
class Service {
 public:
  explicit Service(unsigned workers = 1);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  struct Response {
    int status = 200;
    Json body;
  };

  Response handle(const std::string& method, const std::string& path,
                  const std::map<std::string, std::string>& query, const std::string& body);

  // returns the bound port, or -1; port 0 picks a free one
  int bind(const std::string& host, int port);
  void listen();
  void stop();

  // waits for running jobs
  void drain();

  static Json openapi();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace netres
