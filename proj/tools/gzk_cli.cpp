#include "gzk/gzk.hpp"
int main(){return 0;}
