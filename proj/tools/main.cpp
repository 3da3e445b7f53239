#include <cstdio>

int main() {
  std::puts("surrocae CLI: subcommands land with the pipeline module");
  return 0;
}
