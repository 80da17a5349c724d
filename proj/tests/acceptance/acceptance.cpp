#include <iostream>

#include "criteria.hpp"

int main() { return acceptance::run_all(std::cout) ? 0 : 1; }
