# confhom package marker
