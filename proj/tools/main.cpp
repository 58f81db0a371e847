// plap -- command-line front end for the nonlocal p-Laplacian library.
//
// Talks to the shared library exclusively through the C interface in plap.h.
// Exit codes: 0 success, 1 usage error, otherwise the plap_status of the
// failed call (gate failures map to the gate status).

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "plap.h"

namespace {

void print_usage(std::FILE* out) {
  std::fprintf(out,
               "usage:\n"
               "  plap run <config>            run the experiment described by"
               " an INI config\n"
               "  plap verify [--seed S] [--out DIR]\n"
               "                               run the seeded invariant suite"
               " and write reports\n"
               "  plap kernels                 list the built-in kernel"
               " catalog\n"
               "  plap --version               print the library version\n"
               "  plap --help                  show this message\n"
               "\n"
               "The PLAP_OUTPUT_DIR environment variable overrides the output"
               " directory\nof any run.\n");
}

int report_failure(const char* verb, plap_status status) {
  std::fprintf(stderr, "plap %s: %s error: %s\n", verb,
               plap_status_name(status), plap_last_error());
  return static_cast<int>(status);
}

int cmd_run(int argc, char** argv) {
  if (argc != 1) {
    std::fprintf(stderr, "plap run: expected exactly one config path\n");
    return 1;
  }
  const plap_status status = plap_run_config(argv[0]);
  if (status != PLAP_OK) return report_failure("run", status);
  std::printf("run complete, gates passed\n");
  return 0;
}

int cmd_verify(int argc, char** argv) {
  uint64_t seed = 20260814u;
  const char* out_dir = nullptr;
  for (int i = 0; i < argc; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      char* end = nullptr;
      seed = std::strtoull(argv[++i], &end, 10);
      if (!end || *end != '\0') {
        std::fprintf(stderr, "plap verify: --seed wants an unsigned integer\n");
        return 1;
      }
    } else if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      out_dir = argv[++i];
    } else {
      std::fprintf(stderr, "plap verify: unknown argument '%s'\n", argv[i]);
      return 1;
    }
  }
  const plap_status status = plap_verify(seed, out_dir);
  if (status != PLAP_OK) return report_failure("verify", status);
  std::printf("invariant suite passed\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    print_usage(stderr);
    return 1;
  }
  const char* cmd = argv[1];
  if (std::strcmp(cmd, "--help") == 0 || std::strcmp(cmd, "help") == 0) {
    print_usage(stdout);
    return 0;
  }
  if (std::strcmp(cmd, "--version") == 0) {
    std::printf("plap %s\n", plap_version());
    return 0;
  }
  if (std::strcmp(cmd, "run") == 0) return cmd_run(argc - 2, argv + 2);
  if (std::strcmp(cmd, "verify") == 0) return cmd_verify(argc - 2, argv + 2);
  if (std::strcmp(cmd, "kernels") == 0) {
    std::fputs(plap_kernel_catalog(), stdout);
    return 0;
  }
  std::fprintf(stderr, "plap: unknown command '%s'\n", cmd);
  print_usage(stderr);
  return 1;
}
