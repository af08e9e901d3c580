#include "beadstring/errors.hpp"
