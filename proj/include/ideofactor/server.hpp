#pragma once

// Read-only HTTP export of one fitted factorization.
//
//   GET /space                                    -> space JSON
//   GET /recommend?user=&theta=&delta=&count=&seed=&exclude_consumed=
//
// Query errors answer 400 with {"error": message}.

#include "ideofactor/pipeline.hpp"

#include <memory>
#include <string>

namespace ideofactor {

class SpaceServer {
 public:
  explicit SpaceServer(std::shared_ptr<const Explorer> explorer);
  ~SpaceServer();
  SpaceServer(const SpaceServer&) = delete;
  SpaceServer& operator=(const SpaceServer&) = delete;

  /// Binds `host:port` (port 0 picks a free one). Returns the bound port or
  /// -1 on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ideofactor
