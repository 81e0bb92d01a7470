# Contextual photodetection simulator
