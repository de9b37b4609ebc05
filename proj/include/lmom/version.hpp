#pragma once

#define LMOM_VERSION "lmom 1.0.0"
