package lib;

public class RecipeDetailView {
    private CookBookPanel panel;
}
