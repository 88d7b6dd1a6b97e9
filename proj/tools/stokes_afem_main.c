#include <stdio.h>
#include <string.h>

#include "stokes_afem.h"

static void print_line(stokes_afem_log_level level, const char* message, void* user_data) {
  (void)user_data;
  FILE* stream = level == STOKES_AFEM_LOG_WARNING ? stderr : stdout;
  fprintf(stream, "%s\n", message);
  fflush(stream);
}

static void print_usage(FILE* stream) {
  fprintf(stream,
          "usage: stokes-afem run [options]\n"
          "       stokes-afem --version\n\n%s",
          stokes_afem_usage());
}

static int wants_help(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) {
    if (strcmp(argv[i], "-h") == 0 || strcmp(argv[i], "--help") == 0) return 1;
  }
  return 0;
}

int main(int argc, char** argv) {
  if (argc < 2) {
    print_usage(stderr);
    return 2;
  }
  if (wants_help(1, argv + 1)) {
    print_usage(stdout);
    return 0;
  }
  if (strcmp(argv[1], "--version") == 0) {
    printf("stokes-afem %s\n", stokes_afem_version());
    return 0;
  }
  if (strcmp(argv[1], "run") != 0) {
    fprintf(stderr, "stokes-afem: unknown command '%s'\n", argv[1]);
    print_usage(stderr);
    return 2;
  }
  if (wants_help(argc - 2, argv + 2)) {
    print_usage(stdout);
    return 0;
  }

  stokes_afem_config* config = NULL;
  stokes_afem_status status = stokes_afem_config_create(&config);
  if (status == STOKES_AFEM_OK) {
    status = stokes_afem_config_parse_args(config, argc - 2, (const char* const*)(argv + 2));
  }
  if (status != STOKES_AFEM_OK) {
    fprintf(stderr, "stokes-afem: %s\n", stokes_afem_last_error());
    stokes_afem_config_destroy(config);
    return 2;
  }

  stokes_afem_result* result = NULL;
  status = stokes_afem_run(config, print_line, NULL, &result);
  stokes_afem_config_destroy(config);
  if (status != STOKES_AFEM_OK) {
    fprintf(stderr, "stokes-afem: %s: %s\n", stokes_afem_status_name(status),
            stokes_afem_last_error());
    return 1;
  }
  printf("results written to %s\n", stokes_afem_result_output_dir(result));
  stokes_afem_result_destroy(result);
  return 0;
}
