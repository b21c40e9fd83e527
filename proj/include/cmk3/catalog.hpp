#pragma once

#include "cmk3/jsonio.hpp"

#include <string>
#include <vector>

namespace cmk3 {

// Regenerates every cataloged example from the library; Weierstrass
// equations and field-of-definition data are stored verbatim, not computed.
Json build_catalog();

struct CatalogReport {
    bool ok = false;
    long entries = 0;
    std::vector<std::string> failures;
};

// Loads the catalog file, rebuilds every computed invariant, and diffs.
CatalogReport catalog_verify(const std::string& path);
void catalog_write(const std::string& path);

}  // namespace cmk3
